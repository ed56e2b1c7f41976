use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Coefficient};
use crate::series::FormalVectorField;

use super::word::NCPolynomial;

/// Ordered monomial `L_{i1} L_{i2} ... L_{im}` with `1 <= i1 <= ... <= im`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PbwMonomial(Vec<usize>);

impl PbwMonomial {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.contains(&0) {
            return Err(Error::OutOfRange {
                what: "pbw index",
                detail: "generator indices start at 1".into(),
            });
        }
        if indices.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::OutOfRange {
                what: "pbw monomial",
                detail: format!("{indices:?} is not weakly increasing"),
            });
        }
        Ok(PbwMonomial(indices))
    }

    pub fn unit() -> Self {
        PbwMonomial(Vec::new())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().sum()
    }

    /// Comma-joined index tuple, e.g. `(1,1,3)`; the unit is `()`.
    pub fn key(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        format!("({})", parts.join(","))
    }

    pub fn parse_key(text: &str) -> Result<Self> {
        let inner = text
            .trim()
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| Error::parse(text, "expected a parenthesised index tuple"))?;
        let indices = if inner.trim().is_empty() {
            Vec::new()
        } else {
            inner
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<usize>()
                        .map_err(|e| Error::parse(text, e.to_string()))
                })
                .collect::<Result<Vec<_>>>()?
        };
        Self::new(indices).map_err(|e| Error::parse(text, e.to_string()))
    }
}

impl fmt::Display for PbwMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|i| format!("L{i}")).collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Element of `U(vect)` in the PBW basis. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UElement {
    terms: BTreeMap<PbwMonomial, Coefficient>,
}

impl UElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(PbwMonomial::unit(), Coefficient::one())
    }

    pub fn monomial(m: PbwMonomial, c: Coefficient) -> Self {
        let mut u = Self::zero();
        u.add_term(m, c);
        u
    }

    /// `c L_n`.
    pub fn generator(n: usize, c: Coefficient) -> Result<Self> {
        Ok(Self::monomial(PbwMonomial::new(vec![n])?, c))
    }

    /// The image of `sum p_j L_j` under the inclusion of the Lie algebra.
    pub fn from_field(field: &FormalVectorField) -> Self {
        let mut u = Self::zero();
        for (j, p) in field.coeffs().iter().enumerate() {
            u.add_term(PbwMonomial(vec![j + 1]), p.clone());
        }
        u
    }

    pub fn add_term(&mut self, m: PbwMonomial, c: Coefficient) {
        if c.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry(m.clone())
            .or_insert_with(Coefficient::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> &BTreeMap<PbwMonomial, Coefficient> {
        &self.terms
    }

    pub fn coeff(&self, m: &PbwMonomial) -> Coefficient {
        self.terms.get(m).cloned().unwrap_or_else(Coefficient::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Grading degrees with a nonzero component, ascending.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.terms.keys().map(PbwMonomial::degree).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn max_degree(&self) -> usize {
        self.terms
            .keys()
            .map(PbwMonomial::degree)
            .max()
            .unwrap_or(0)
    }

    /// Homogeneous component of grading degree `k`.
    pub fn component(&self, k: usize) -> UElement {
        UElement {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == k)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn components(&self) -> BTreeMap<usize, UElement> {
        self.degrees()
            .into_iter()
            .map(|k| (k, self.component(k)))
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Coefficient::one())
    }

    pub fn scale(&self, c: &Coefficient) -> Self {
        let mut out = Self::zero();
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    /// The grading automorphism: multiplies the degree-`k` component by `t^k`.
    pub fn scale_grading(&self, t: &Coefficient) -> Self {
        let mut out = Self::zero();
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * rational::pow(t, m.degree()));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut raw: BTreeMap<Vec<usize>, Coefficient> = BTreeMap::new();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let mut word = a.0.clone();
                word.extend_from_slice(&b.0);
                *raw.entry(word).or_insert_with(Coefficient::zero) += x * y;
            }
        }
        straighten_map(raw, Strategy::Leftmost)
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }
}

impl fmt::Display for UElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("({})*{}", rational::format(c), m))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// PBW monomials of degree `k`: the partitions of `k` as increasing tuples.
pub fn pbw_basis(k: usize) -> Vec<PbwMonomial> {
    fn extend(rest: usize, min: usize, prefix: &mut Vec<usize>, out: &mut Vec<PbwMonomial>) {
        if rest == 0 {
            out.push(PbwMonomial(prefix.clone()));
            return;
        }
        for i in min..=rest {
            prefix.push(i);
            extend(rest - i, i, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(k, 1, &mut Vec::new(), &mut out);
    out
}

/// Which out-of-order adjacent pair is rewritten first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
}

/// Rewrites arbitrary products of generators into the PBW basis using
/// `L_m L_n = L_n L_m + (n - m) L_{n+m}` for `m > n`.
pub fn pbw_straighten(raw: &[(Vec<usize>, Coefficient)], strategy: Strategy) -> Result<UElement> {
    let mut map: BTreeMap<Vec<usize>, Coefficient> = BTreeMap::new();
    for (word, c) in raw {
        if word.contains(&0) {
            return Err(Error::OutOfRange {
                what: "pbw index",
                detail: "generator indices start at 1".into(),
            });
        }
        *map.entry(word.clone()).or_insert_with(Coefficient::zero) += c;
    }
    Ok(straighten_map(map, strategy))
}

fn straighten_map(mut pending: BTreeMap<Vec<usize>, Coefficient>, strategy: Strategy) -> UElement {
    let mut out = UElement::zero();
    while let Some((word, c)) = pending.pop_first() {
        if c.is_zero() {
            continue;
        }
        let mut inversions = (0..word.len().saturating_sub(1)).filter(|&i| word[i] > word[i + 1]);
        let pos = match strategy {
            Strategy::Leftmost => inversions.next(),
            Strategy::Rightmost => inversions.next_back(),
        };
        let Some(i) = pos else {
            out.add_term(PbwMonomial(word), c);
            continue;
        };
        let (m, n) = (word[i], word[i + 1]);
        let mut swapped = word.clone();
        swapped.swap(i, i + 1);
        *pending.entry(swapped).or_insert_with(Coefficient::zero) += &c;
        let mut merged = word[..i].to_vec();
        merged.push(m + n);
        merged.extend_from_slice(&word[i + 2..]);
        *pending.entry(merged).or_insert_with(Coefficient::zero) +=
            &c * rational::int(n as i64 - m as i64);
    }
    out
}

/// The algebra map `w_1 -> L_1`, `w_2 -> L_2`.
pub fn pi_map(p: &NCPolynomial) -> UElement {
    let raw = p
        .terms()
        .iter()
        .map(|(w, c)| (w.letters().iter().map(|&l| l as usize).collect(), c.clone()))
        .collect();
    straighten_map(raw, Strategy::Leftmost)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::word::Word;
    use crate::rational::int;

    fn m(ix: &[usize]) -> PbwMonomial {
        PbwMonomial::new(ix.to_vec()).unwrap()
    }

    #[test]
    fn l2_l1_straightens() {
        let u = pbw_straighten(&[(vec![2, 1], int(1))], Strategy::Leftmost).unwrap();
        let expected =
            UElement::monomial(m(&[1, 2]), int(1)).add(&UElement::monomial(m(&[3]), int(-1)));
        assert_eq!(u, expected);
    }

    #[test]
    fn strategies_agree() {
        let raw = vec![(vec![3, 1, 2, 1], int(2)), (vec![2, 2, 1, 4, 1], int(-1))];
        let a = pbw_straighten(&raw, Strategy::Leftmost).unwrap();
        let b = pbw_straighten(&raw, Strategy::Rightmost).unwrap();
        assert_eq!(a, b);
        assert!(a
            .terms()
            .keys()
            .all(|k| k.indices().windows(2).all(|w| w[0] <= w[1])));
    }

    #[test]
    fn commutator_matches_bracket() {
        let l1 = UElement::generator(1, int(1)).unwrap();
        let l2 = UElement::generator(2, int(1)).unwrap();
        let l3 = UElement::generator(3, int(1)).unwrap();
        assert_eq!(l1.commutator(&l2), l3);
        assert_eq!(l1.commutator(&l3), UElement::generator(4, int(2)).unwrap());
    }

    #[test]
    fn pi_of_commutator() {
        let w1 = NCPolynomial::generator(1).unwrap();
        let w2 = NCPolynomial::generator(2).unwrap();
        let p = w1.mul(&w2).sub(&w2.mul(&w1));
        assert_eq!(pi_map(&p), UElement::generator(3, int(1)).unwrap());
        assert_eq!(
            pi_map(&NCPolynomial::monomial(Word::empty(), int(4))),
            UElement::one().scale(&int(4))
        );
    }

    #[test]
    fn basis_sizes_are_partition_numbers() {
        let sizes: Vec<usize> = (0..9).map(|k| pbw_basis(k).len()).collect();
        assert_eq!(sizes, vec![1, 1, 2, 3, 5, 7, 11, 15, 22]);
        assert!(pbw_basis(6).iter().all(|m| m.degree() == 6));
    }

    #[test]
    fn monomial_keys_round_trip() {
        for ix in [vec![], vec![3], vec![1, 1, 2]] {
            let mono = m(&ix);
            assert_eq!(PbwMonomial::parse_key(&mono.key()).unwrap(), mono);
        }
        assert!(PbwMonomial::parse_key("(2,1)").is_err());
        assert!(PbwMonomial::parse_key("1,2").is_err());
    }
}
