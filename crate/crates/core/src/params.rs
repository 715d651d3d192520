//! Seeded draws of generic parameters in the regime `0 < q < 1`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::oscillator::{LabelSet, RepLabel};

pub const Q_RANGE: (f64, f64) = (0.3, 0.9);
pub const GAMMA_RANGE: (f64, f64) = (0.5, 2.5);
pub const C_RANGE: (f64, f64) = (0.2, 3.0);

#[derive(Clone, Debug)]
pub struct ParamSampler {
    rng: ChaCha8Rng,
}

/// One parameter draw.
#[derive(Clone, Debug)]
pub struct Draw {
    pub q: f64,
    pub labels: LabelSet,
}

impl ParamSampler {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn q(&mut self) -> f64 {
        self.rng.random_range(Q_RANGE.0..Q_RANGE.1)
    }

    pub fn label(&mut self) -> RepLabel {
        let gamma = self.rng.random_range(GAMMA_RANGE.0..GAMMA_RANGE.1);
        let c = self.rng.random_range(C_RANGE.0..C_RANGE.1);
        RepLabel { gamma, c }
    }

    pub fn homogeneous(&mut self, n: usize) -> Result<Draw> {
        let q = self.q();
        let l = self.label();
        Ok(Draw { q, labels: LabelSet::homogeneous(n, l)? })
    }

    /// `n - 1` equal labels and one different label at a random slot.
    pub fn one_distinguished(&mut self, n: usize) -> Result<Draw> {
        let q = self.q();
        let a = self.label();
        let b = self.label();
        let pos = self.rng.random_range(0..n);
        Ok(Draw { q, labels: LabelSet::one_distinguished(n, a, b, pos)? })
    }

    /// Independent label in every slot.
    pub fn distinct(&mut self, n: usize) -> Result<Draw> {
        let q = self.q();
        let labels: Vec<_> = (0..n).map(|_| self.label()).collect();
        Ok(Draw { q, labels: LabelSet::new(&labels)? })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn draws_are_reproducible_and_in_range() {
        let mut a = ParamSampler::new(42);
        let mut b = ParamSampler::new(42);
        for _ in 0..20 {
            let (x, y) = (a.q(), b.q());
            assert_eq!(x, y);
            assert!((Q_RANGE.0..Q_RANGE.1).contains(&x));
            let l = a.label();
            assert!((GAMMA_RANGE.0..GAMMA_RANGE.1).contains(&l.gamma));
            assert!((C_RANGE.0..C_RANGE.1).contains(&l.c));
            b.label();
        }
    }
}
