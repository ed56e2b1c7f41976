use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::norms::NormValue;
use crate::rational::{self, Coefficient};

/// Monomial `w_{i1} w_{i2} ... w_{im}` in the free algebra on `w_1, w_2`.
/// `w_1` has grading degree 1 and `w_2` degree 2.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(letters: Vec<u8>) -> Result<Self> {
        if let Some(bad) = letters.iter().find(|&&l| l != 1 && l != 2) {
            return Err(Error::OutOfRange {
                what: "letter",
                detail: format!("generator index {bad} is not 1 or 2"),
            });
        }
        Ok(Word(letters))
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of `w_1` letters.
    pub fn d1(&self) -> usize {
        self.0.iter().filter(|&&l| l == 1).count()
    }

    /// Number of `w_2` letters.
    pub fn d2(&self) -> usize {
        self.0.iter().filter(|&&l| l == 2).count()
    }

    pub fn degree(&self) -> usize {
        self.d1() + 2 * self.d2()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|l| format!("w{l}")).collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// All words of graded degree `k`, in lexicographic order of letters.
/// Their number is the Fibonacci number `F(k+1)`.
pub fn words_of_degree(k: usize) -> Vec<Word> {
    let mut table: Vec<Vec<Vec<u8>>> = vec![vec![Vec::new()]];
    for d in 1..=k {
        let mut words = Vec::new();
        for w in &table[d - 1] {
            let mut v = vec![1];
            v.extend_from_slice(w);
            words.push(v);
        }
        if d >= 2 {
            for w in &table[d - 2] {
                let mut v = vec![2];
                v.extend_from_slice(w);
                words.push(v);
            }
        }
        words.sort();
        table.push(words);
    }
    table.swap_remove(k).into_iter().map(Word).collect()
}

/// Finite sum `sum_I c_I w^I` with no zero coefficients stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NCPolynomial {
    terms: BTreeMap<Word, Coefficient>,
}

impl NCPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(word: Word, c: Coefficient) -> Self {
        let mut p = Self::zero();
        p.add_term(word, c);
        p
    }

    pub fn generator(index: u8) -> Result<Self> {
        Ok(Self::monomial(
            Word::new(vec![index])?,
            Coefficient::from_integer(1.into()),
        ))
    }

    pub fn add_term(&mut self, word: Word, c: Coefficient) {
        let entry = self.terms.entry(word).or_insert_with(Coefficient::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn terms(&self) -> &BTreeMap<Word, Coefficient> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Coefficient::from_integer(1.into())))
    }

    pub fn scale(&self, c: &Coefficient) -> Self {
        let mut out = Self::zero();
        for (w, v) in &self.terms {
            out.add_term(w.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(u.concat(v), a * b);
            }
        }
        out
    }
}

/// `R_[t1,t2](sum c_I w^I) = sum |c_I| t1^{d1(I)} t2^{d2(I)}`.
pub fn r_norm(p: &NCPolynomial, t1: &Coefficient, t2: &Coefficient) -> Result<NormValue> {
    rational::require_positive("t1", t1)?;
    rational::require_positive("t2", t2)?;
    let sum = p
        .terms()
        .iter()
        .map(|(w, c)| c.abs() * rational::pow(t1, w.d1()) * rational::pow(t2, w.d2()))
        .fold(Coefficient::zero(), |acc, x| acc + x);
    Ok(NormValue::exact(sum))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn w(letters: &[u8]) -> Word {
        Word::new(letters.to_vec()).unwrap()
    }

    #[test]
    fn word_counts_are_fibonacci() {
        let counts: Vec<usize> = (0..10).map(|k| words_of_degree(k).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 8, 13, 21, 34, 55]);
        assert!(words_of_degree(6).iter().all(|w| w.degree() == 6));
        assert_eq!(
            words_of_degree(3),
            vec![w(&[1, 1, 1]), w(&[1, 2]), w(&[2, 1])]
        );
    }

    #[test]
    fn rejects_bad_letters() {
        assert!(Word::new(vec![1, 3]).is_err());
        assert!(Word::new(vec![0]).is_err());
    }

    #[test]
    fn r_norm_examples() {
        let w1 = NCPolynomial::generator(1).unwrap();
        let w2 = NCPolynomial::generator(2).unwrap();
        let t1 = ratio(3, 4);
        assert_eq!(r_norm(&w1, &t1, &int(5)).unwrap().value, t1);
        let comm = w1.mul(&w2).sub(&w2.mul(&w1));
        assert_eq!(r_norm(&comm, &int(1), &int(1)).unwrap().value, int(2));
        assert!(r_norm(&comm, &int(0), &int(1)).is_err());
    }

    #[test]
    fn zero_terms_are_dropped() {
        let w1 = NCPolynomial::generator(1).unwrap();
        assert!(w1.sub(&w1).is_zero());
        assert_eq!(w1.mul(&NCPolynomial::monomial(Word::empty(), int(1))), w1);
    }
}
