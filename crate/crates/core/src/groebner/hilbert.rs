use num_bigint::BigUint;

use super::{GroebnerBasis, Monomial};
use crate::SizeDistribution;

/// Hilbert function of the quotient by a zero-dimensional boolean ideal:
/// `HF(d)` is the number of squarefree standard monomials of degree `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertData {
    pub function: SizeDistribution,
}

impl HilbertData {
    pub fn value(&self, degree: usize) -> BigUint {
        self.function.get(degree)
    }

    /// Dimension of the quotient over F2; the number of points of the
    /// variety for these radical ideals.
    pub fn total(&self) -> BigUint {
        self.function.total()
    }
}

/// Standard monomials of degree at most `max_degree`, grouped by degree.
pub fn standard_monomials(basis: &GroebnerBasis, max_degree: usize) -> Vec<Vec<Monomial>> {
    let walker = Walker::new(basis, max_degree);
    let mut groups = vec![Vec::new(); max_degree.min(walker.num_vars) + 1];
    walker.walk(0, Monomial::ONE, &mut |m| groups[m.degree()].push(m));
    while groups.len() > 1 && groups.last().is_some_and(Vec::is_empty) {
        groups.pop();
    }
    if basis.is_unit() {
        groups.clear();
    }
    groups
}

pub fn hilbert_function(basis: &GroebnerBasis) -> HilbertData {
    if basis.is_unit() {
        return HilbertData {
            function: SizeDistribution::zero(),
        };
    }
    let walker = Walker::new(basis, usize::MAX);
    let mut counts = vec![0u128; walker.num_vars + 1];
    walker.walk(0, Monomial::ONE, &mut |m| counts[m.degree()] += 1);
    HilbertData {
        function: SizeDistribution::from_u128s(&counts),
    }
}

/// Depth-first walk over squarefree monomials adding variables in
/// increasing index order. A leading monomial becomes a divisor exactly when
/// its highest variable is added, so each step only checks those.
struct Walker {
    num_vars: usize,
    max_degree: usize,
    closing: Vec<Vec<u128>>,
}

impl Walker {
    fn new(basis: &GroebnerBasis, max_degree: usize) -> Self {
        let num_vars = basis.num_vars();
        let mut closing = vec![Vec::new(); num_vars];
        for lm in basis.leading_monomials() {
            if let Some(v) = lm.last_var() {
                closing[v].push(lm.0);
            }
        }
        Walker {
            num_vars,
            max_degree,
            closing,
        }
    }

    fn walk(&self, next: usize, current: Monomial, visit: &mut impl FnMut(Monomial)) {
        visit(current);
        if current.degree() == self.max_degree {
            return;
        }
        for v in next..self.num_vars {
            let with = current.0 | 1 << v;
            if self.closing[v].iter().all(|&lm| lm & !with != 0) {
                self.walk(v + 1, Monomial(with), visit);
            }
        }
    }
}
