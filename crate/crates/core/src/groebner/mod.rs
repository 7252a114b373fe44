//! Gröbner bases of boolean ideals over F2.
//!
//! Arithmetic happens in the boolean quotient `F2[x] / (x_i^2 + x_i)`:
//! monomials are squarefree and stored as bitsets over at most 128
//! variables, polynomials are sets of monomials and addition is symmetric
//! difference. The field polynomials are implicit in every ideal.

mod basis;
mod hilbert;
mod variety;

use std::cmp::Ordering;
use std::fmt;

pub use basis::{buchberger, normal_form, GroebnerBasis};
pub use hilbert::{hilbert_function, standard_monomials, HilbertData};
pub use variety::variety;

use crate::{Error, Result};

pub const MAX_VARIABLES: usize = 128;

/// A squarefree monomial; bit `i` set means variable `i` divides it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(pub u128);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn var(i: usize) -> Self {
        Monomial(1 << i)
    }

    pub fn from_vars(vars: impl IntoIterator<Item = usize>) -> Self {
        Monomial(vars.into_iter().fold(0, |m, v| m | 1 << v))
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn divides(self, other: Monomial) -> bool {
        self.0 & !other.0 == 0
    }

    /// Product in the boolean quotient, which is also the lcm.
    #[inline]
    pub fn times(self, other: Monomial) -> Monomial {
        Monomial(self.0 | other.0)
    }

    /// `self / other`, assuming `other` divides `self`.
    #[inline]
    pub fn quotient(self, other: Monomial) -> Monomial {
        Monomial(self.0 & !other.0)
    }

    pub fn is_coprime(self, other: Monomial) -> bool {
        self.0 & other.0 == 0
    }

    pub fn vars(self) -> impl Iterator<Item = usize> {
        crate::hamming::bits(self.0)
    }

    /// Highest variable index, `None` for the constant monomial.
    pub fn last_var(self) -> Option<usize> {
        (self.0 != 0).then(|| 127 - self.0.leading_zeros() as usize)
    }
}

/// A monomial order. Variable `0` has the highest precedence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TermOrder {
    #[default]
    Lex,
    /// Degree first, ties broken lexicographically.
    DegLex,
}

impl TermOrder {
    #[inline]
    pub fn cmp(self, a: Monomial, b: Monomial) -> Ordering {
        if let TermOrder::DegLex = self {
            match a.degree().cmp(&b.degree()) {
                Ordering::Equal => {}
                other => return other,
            }
        }
        let diff = a.0 ^ b.0;
        if diff == 0 {
            Ordering::Equal
        } else if a.0 >> diff.trailing_zeros() & 1 == 1 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}

/// A polynomial over F2 in the boolean quotient: a set of squarefree
/// monomials.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BoolPolynomial {
    // ascending by raw bits, no duplicates
    terms: Vec<Monomial>,
}

impl BoolPolynomial {
    pub fn zero() -> Self {
        BoolPolynomial::default()
    }

    pub fn one() -> Self {
        BoolPolynomial {
            terms: vec![Monomial::ONE],
        }
    }

    pub fn monomial(m: Monomial) -> Self {
        BoolPolynomial { terms: vec![m] }
    }

    pub fn var(i: usize) -> Self {
        Self::monomial(Monomial::var(i))
    }

    /// Sum of the given monomials; repeated monomials cancel in pairs.
    pub fn from_terms(terms: impl IntoIterator<Item = Monomial>) -> Self {
        let mut terms: Vec<Monomial> = terms.into_iter().collect();
        terms.sort_unstable();
        let mut out = Vec::with_capacity(terms.len());
        for t in terms {
            if out.last() == Some(&t) {
                out.pop();
            } else {
                out.push(t);
            }
        }
        BoolPolynomial { terms: out }
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms == [Monomial::ONE]
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn contains(&self, m: Monomial) -> bool {
        self.terms.binary_search(&m).is_ok()
    }

    pub fn leading(&self, order: TermOrder) -> Option<Monomial> {
        self.terms
            .iter()
            .copied()
            .max_by(|&a, &b| order.cmp(a, b))
    }

    pub fn degree(&self) -> usize {
        self.terms.iter().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &BoolPolynomial) -> BoolPolynomial {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        BoolPolynomial { terms: out }
    }

    pub fn mul_monomial(&self, m: Monomial) -> BoolPolynomial {
        Self::from_terms(self.terms.iter().map(|t| t.times(m)))
    }

    pub fn mul(&self, other: &BoolPolynomial) -> BoolPolynomial {
        Self::from_terms(
            self.terms
                .iter()
                .flat_map(|a| other.terms.iter().map(move |b| a.times(*b))),
        )
    }

    /// Value at the 0/1 point whose set variables are the bits of `point`.
    pub fn evaluate(&self, point: u128) -> bool {
        self.terms.iter().filter(|m| m.0 & !point == 0).count() % 2 == 1
    }

    pub fn variables(&self) -> u128 {
        self.terms.iter().fold(0, |acc, m| acc | m.0)
    }

    pub fn display<'a>(&'a self, ring: &'a BoolRing, order: TermOrder) -> impl fmt::Display + 'a {
        DisplayPoly {
            poly: self,
            ring,
            order,
        }
    }
}

struct DisplayPoly<'a> {
    poly: &'a BoolPolynomial,
    ring: &'a BoolRing,
    order: TermOrder,
}

impl fmt::Display for DisplayPoly<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        let mut terms = self.poly.terms.clone();
        terms.sort_by(|&a, &b| self.order.cmp(b, a));
        for (i, m) in terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if *m == Monomial::ONE {
                f.write_str("1")?;
                continue;
            }
            for (k, v) in m.vars().enumerate() {
                if k > 0 {
                    f.write_str("*")?;
                }
                f.write_str(&self.ring.labels[v])?;
            }
        }
        Ok(())
    }
}

/// Variable universe of a boolean polynomial ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoolRing {
    labels: Vec<String>,
}

impl BoolRing {
    pub fn new(labels: Vec<String>) -> Result<Self> {
        if labels.len() > MAX_VARIABLES {
            return Err(Error::Unsupported(format!(
                "{} variables (at most {MAX_VARIABLES})",
                labels.len()
            )));
        }
        Ok(BoolRing { labels })
    }

    /// Variables `x_1, ..., x_count`.
    pub fn numbered(count: usize) -> Result<Self> {
        Self::new((1..=count).map(|i| format!("x_{i}")).collect())
    }

    pub fn num_vars(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// An ideal of the boolean quotient given by generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoolIdeal {
    pub ring: BoolRing,
    pub generators: Vec<BoolPolynomial>,
}

impl BoolIdeal {
    pub fn new(ring: BoolRing, generators: Vec<BoolPolynomial>) -> Self {
        BoolIdeal { ring, generators }
    }

    pub fn num_vars(&self) -> usize {
        self.ring.num_vars()
    }
}
