//! Seeded generators for random test instances.
//!
//! All generators draw from a caller-owned [`Instances`] stream, so a seed
//! reproduces the same instances on every platform.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::freealg::{pbw_basis, NCPolynomial, UElement, Word};
use crate::rational::{self, Coefficient};
use crate::series::{FormalDiffeo, FormalVectorField};

pub struct Instances {
    rng: ChaCha8Rng,
}

impl Instances {
    pub fn new(seed: u64) -> Self {
        Instances {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Independent stream for a named purpose, so suites do not shift each
    /// other's instances.
    pub fn derived(seed: u64, stream: &str) -> Self {
        let salt = stream.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
            (h ^ b as u64).wrapping_mul(0x100_0000_01b3)
        });
        Self::new(seed ^ salt)
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    /// `p/q` with `|p| <= 9`, `1 <= q <= 5`.
    pub fn rational(&mut self) -> Coefficient {
        let p = self.rng.gen_range(-9i64..=9);
        let q = self.rng.gen_range(1i64..=5);
        rational::ratio(p, q)
    }

    /// Nonzero rational with numerator and denominator in `1..=bound`.
    pub fn positive(&mut self, bound: i64) -> Coefficient {
        let p = self.rng.gen_range(1..=bound);
        let q = self.rng.gen_range(1..=bound);
        rational::ratio(p, q)
    }

    /// Rational in `[-1, 1]`.
    pub fn unit_rational(&mut self) -> Coefficient {
        let q = self.rng.gen_range(1i64..=6);
        let p = self.rng.gen_range(-q..=q);
        rational::ratio(p, q)
    }

    fn sparse(
        &mut self,
        len: usize,
        mut draw: impl FnMut(&mut Self) -> Coefficient,
    ) -> Vec<Coefficient> {
        (0..len)
            .map(|_| {
                if self.chance(0.7) {
                    draw(self)
                } else {
                    Coefficient::zero()
                }
            })
            .collect()
    }

    pub fn diffeo(&mut self, order: usize) -> FormalDiffeo {
        let higher = self.sparse(order.saturating_sub(1), Self::rational);
        FormalDiffeo::new(order, higher).expect("lengths match order")
    }

    /// Diffeomorphism with every `|a_j| <= 1`.
    pub fn small_diffeo(&mut self, order: usize) -> FormalDiffeo {
        let higher = self.sparse(order.saturating_sub(1), Self::unit_rational);
        FormalDiffeo::new(order, higher).expect("lengths match order")
    }

    pub fn field(&mut self, order: usize) -> FormalVectorField {
        let coeffs = self.sparse(order, Self::rational);
        FormalVectorField::new(order, coeffs).expect("lengths match order")
    }

    /// Field of the given order supported on `L_1..L_support`.
    pub fn supported_field(&mut self, order: usize, support: usize) -> FormalVectorField {
        let mut coeffs = self.sparse(support.min(order), Self::rational);
        coeffs.resize(order, Coefficient::zero());
        FormalVectorField::new(order, coeffs).expect("lengths match order")
    }

    pub fn word(&mut self, max_len: usize) -> Word {
        let len = self.range(0, max_len);
        Word::new(
            (0..len)
                .map(|_| if self.chance(0.5) { 1 } else { 2 })
                .collect(),
        )
        .expect("letters are 1 or 2")
    }

    pub fn nc_polynomial(&mut self, terms: usize, max_len: usize) -> NCPolynomial {
        let mut p = NCPolynomial::zero();
        for _ in 0..terms {
            let w = self.word(max_len);
            p.add_term(w, self.rational());
        }
        p
    }

    /// Unordered product of `1..=max_len` generators with total degree at
    /// most `max_degree`.
    pub fn raw_product(&mut self, max_len: usize, max_degree: usize) -> Vec<usize> {
        let len = self.range(1, max_len);
        let mut out = Vec::with_capacity(len);
        let mut budget = max_degree;
        for slot in 0..len {
            let reserve = len - slot - 1;
            if budget <= reserve {
                break;
            }
            let i = self.range(1, (budget - reserve).min(max_degree));
            out.push(i);
            budget -= i;
        }
        out
    }

    /// Random combination of PBW monomials of degree `k`, not zero.
    pub fn homogeneous(&mut self, k: usize) -> UElement {
        let basis = pbw_basis(k);
        loop {
            let mut u = UElement::zero();
            for m in &basis {
                if self.chance(0.5) {
                    u.add_term(m.clone(), self.rational());
                }
            }
            if !u.is_zero() {
                return u;
            }
        }
    }
}
