use lpbounds::lattices::{construct, shortest_vectors, LatticeName};

#[test]
fn leech_minimal_vectors() {
    let l = construct(&LatticeName::Leech).unwrap();
    let t = std::time::Instant::now();
    let r = shortest_vectors(&l, None).unwrap();
    eprintln!("leech enumeration: {:?}, {} nodes", t.elapsed(), r.nodes);
    assert_eq!(r.min_sq_norm_exact.as_deref(), Some("4"));
    assert_eq!(r.count, 196_560);
}
