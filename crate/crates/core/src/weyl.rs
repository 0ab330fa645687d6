//! The Weyl group of SL(3), i.e. S3 acting by permutation of coordinates.

/// A permutation `w` of `{0, 1, 2}`; `w.apply(v)[i] = v[w[i]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WeylElement(pub [usize; 3]);

impl WeylElement {
    /// Number of inversions, which equals the Coxeter length for S3.
    pub fn length(&self) -> u32 {
        let w = self.0;
        let mut inv = 0;
        for i in 0..3 {
            for j in i + 1..3 {
                if w[i] > w[j] {
                    inv += 1;
                }
            }
        }
        inv
    }

    pub fn sign(&self) -> i64 {
        if self.length().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn apply<T: Copy>(&self, v: [T; 3]) -> [T; 3] {
        [v[self.0[0]], v[self.0[1]], v[self.0[2]]]
    }
}

pub const WEYL_GROUP: [WeylElement; 6] = [
    WeylElement([0, 1, 2]),
    WeylElement([1, 0, 2]),
    WeylElement([0, 2, 1]),
    WeylElement([1, 2, 0]),
    WeylElement([2, 0, 1]),
    WeylElement([2, 1, 0]),
];

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn lengths_and_closure() {
        let lengths: Vec<u32> = WEYL_GROUP.iter().map(|w| w.length()).collect();
        assert_eq!(lengths, vec![0, 1, 1, 2, 2, 3]);
        let images: HashSet<[u8; 3]> = WEYL_GROUP.iter().map(|w| w.apply([1u8, 2, 3])).collect();
        assert_eq!(images.len(), 6);
    }
}
