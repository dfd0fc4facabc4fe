use crate::gf2::BitVec;

/// A point of the ball together with its distance from the center.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YCandidate {
    pub bits: BitVec,
    pub distance: usize,
}

/// All vectors within `radius` of `center`, by increasing distance and,
/// within one distance, by lexicographically increasing sets of flipped
/// positions. The center comes first.
#[derive(Clone, Debug)]
pub struct HammingBall {
    center: BitVec,
    radius: usize,
    distance: usize,
    // flipped positions for the next item, strictly increasing
    combo: Vec<usize>,
    done: bool,
}

impl HammingBall {
    /// `radius` is clamped to the vector length.
    pub fn new(center: BitVec, radius: usize) -> Self {
        let radius = radius.min(center.len());
        HammingBall { center, radius, distance: 0, combo: Vec::new(), done: false }
    }

    fn advance(&mut self) {
        let n = self.center.len();
        let k = self.combo.len();
        // rightmost position that can still move right
        let mut i = k;
        while i > 0 {
            i -= 1;
            if self.combo[i] < n - k + i {
                self.combo[i] += 1;
                for j in i + 1..k {
                    self.combo[j] = self.combo[j - 1] + 1;
                }
                return;
            }
        }
        self.distance += 1;
        if self.distance > self.radius {
            self.done = true;
        } else {
            self.combo = (0..self.distance).collect();
        }
    }
}

impl Iterator for HammingBall {
    type Item = YCandidate;

    fn next(&mut self) -> Option<YCandidate> {
        if self.done {
            return None;
        }
        let mut bits = self.center.clone();
        for &i in &self.combo {
            bits.flip(i);
        }
        let item = YCandidate { bits, distance: self.distance };
        self.advance();
        Some(item)
    }
}

pub fn hamming_ball(center: &BitVec, radius: usize) -> HammingBall {
    HammingBall::new(center.clone(), radius)
}

/// Number of points in a ball of the given radius in `n` dimensions.
pub fn ball_size(n: usize, radius: usize) -> u64 {
    let mut total = 0u64;
    let mut binom = 1u64;
    for k in 0..=radius.min(n) {
        total += binom;
        binom = binom * (n - k) as u64 / (k + 1) as u64;
    }
    total
}
