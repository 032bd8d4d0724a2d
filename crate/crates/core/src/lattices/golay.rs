use serde::{Deserialize, Serialize};

/// Generator polynomial of the cyclic binary Golay code of length 23,
/// `1 + x^2 + x^4 + x^5 + x^6 + x^10 + x^11`, bit `i` holding `x^i`.
pub const GOLAY_GENERATOR_POLY: u32 = 0b1100_0111_0101;

/// The extended binary Golay code: 12 generator words of 24 bits.
///
/// Rows are the shifts `x^i g(x)`, `i = 0..11`, of the cyclic generator,
/// each extended by an overall parity bit in position 23.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GolayCode {
    pub generators: [u32; 12],
}

pub fn golay_generate() -> GolayCode {
    let mut generators = [0u32; 12];
    for (i, g) in generators.iter_mut().enumerate() {
        let word = GOLAY_GENERATOR_POLY << i;
        let parity = word.count_ones() & 1;
        *g = word | (parity << 23);
    }
    GolayCode { generators }
}

impl GolayCode {
    pub const LENGTH: usize = 24;

    pub fn dimension(&self) -> usize {
        12
    }

    /// All 4096 codewords, indexed by the generator combination.
    pub fn codewords(&self) -> Vec<u32> {
        (0u32..4096)
            .map(|mask| {
                self.generators
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .fold(0, |acc, (_, g)| acc ^ g)
            })
            .collect()
    }

    /// `counts[w]` = number of codewords of Hamming weight `w`.
    pub fn weight_distribution(&self) -> [usize; 25] {
        let mut counts = [0; 25];
        for w in self.codewords() {
            counts[w.count_ones() as usize] += 1;
        }
        counts
    }

    pub fn min_weight(&self) -> usize {
        self.codewords().iter().filter(|w| **w != 0).map(|w| w.count_ones() as usize).min().unwrap_or(0)
    }

    /// Generators pairwise orthogonal mod 2 and of full rank 12, so the code
    /// equals its dual.
    pub fn is_self_dual(&self) -> bool {
        let orthogonal = self
            .generators
            .iter()
            .all(|a| self.generators.iter().all(|b| (a & b).count_ones() % 2 == 0));
        orthogonal && self.rank() == 12
    }

    /// GF(2) rank of the generators.
    pub fn rank(&self) -> usize {
        let mut rows: Vec<u32> = self.generators.to_vec();
        let mut rank = 0;
        for bit in 0..24 {
            if let Some(p) = (rank..rows.len()).find(|&r| rows[r] >> bit & 1 == 1) {
                rows.swap(rank, p);
                let pivot = rows[rank];
                for (r, row) in rows.iter_mut().enumerate() {
                    if r != rank && *row >> bit & 1 == 1 {
                        *row ^= pivot;
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    pub fn contains(&self, word: u32) -> bool {
        // Membership by the parity-check view: self-dual, so a word is a
        // codeword iff it is orthogonal to every generator and the code is full.
        word >> 24 == 0 && self.generators.iter().all(|g| (g & word).count_ones() % 2 == 0)
    }

    /// Bit vector of a codeword as 0/1 entries.
    pub fn bits(word: u32) -> [u8; 24] {
        let mut out = [0u8; 24];
        for (i, b) in out.iter_mut().enumerate() {
            *b = (word >> i & 1) as u8;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_enumerator() {
        let code = golay_generate();
        let w = code.weight_distribution();
        assert_eq!(w[0], 1);
        assert_eq!(w[8], 759);
        assert_eq!(w[12], 2576);
        assert_eq!(w[16], 759);
        assert_eq!(w[24], 1);
        assert_eq!(w.iter().sum::<usize>(), 4096);
        assert_eq!(code.min_weight(), 8);
        assert!(code.is_self_dual());
        assert!(code.contains(0));
        assert!(!code.contains(1));
    }
}
