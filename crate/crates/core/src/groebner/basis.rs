use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::{BoolIdeal, BoolPolynomial, BoolRing, Monomial, TermOrder};

/// The reduced Gröbner basis of an ideal plus all field polynomials, with
/// the field polynomials left implicit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerBasis {
    num_vars: usize,
    order: TermOrder,
    polys: Vec<BoolPolynomial>,
    leading: Vec<Monomial>,
}

impl GroebnerBasis {
    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn order(&self) -> TermOrder {
        self.order
    }

    /// Basis elements sorted by decreasing leading monomial.
    pub fn polys(&self) -> &[BoolPolynomial] {
        &self.polys
    }

    pub fn leading_monomials(&self) -> &[Monomial] {
        &self.leading
    }

    pub fn is_unit(&self) -> bool {
        self.polys.first().is_some_and(BoolPolynomial::is_one)
    }

    pub fn normal_form(&self, f: &BoolPolynomial) -> BoolPolynomial {
        let divisors: Vec<_> = self.leading.iter().copied().zip(&self.polys).collect();
        reduce(f, &divisors, self.order)
    }

    pub fn contains(&self, f: &BoolPolynomial) -> bool {
        self.normal_form(f).is_zero()
    }

    /// No monomial of any element is divisible by the leading monomial of
    /// another element.
    pub fn is_reduced(&self) -> bool {
        self.polys.iter().enumerate().all(|(i, g)| {
            g.terms().iter().all(|&t| {
                self.leading
                    .iter()
                    .enumerate()
                    .all(|(j, lm)| i == j || !lm.divides(t))
            })
        })
    }

    /// One polynomial per line, sorted, for golden-file diffs.
    pub fn dump(&self, ring: &BoolRing) -> String {
        let mut lines: Vec<String> = self
            .polys
            .iter()
            .map(|p| p.display(ring, self.order).to_string())
            .collect();
        lines.sort();
        let mut out = lines.join("\n");
        out.push('\n');
        out
    }
}

/// Fully reduces `f` modulo `divisors` (and the implicit field
/// polynomials): no monomial of the result is divisible by a leading
/// monomial of a divisor.
pub fn normal_form(
    f: &BoolPolynomial,
    divisors: &[BoolPolynomial],
    order: TermOrder,
) -> BoolPolynomial {
    let divisors: Vec<_> = divisors
        .iter()
        .filter_map(|g| g.leading(order).map(|lm| (lm, g)))
        .collect();
    reduce(f, &divisors, order)
}

fn reduce(
    f: &BoolPolynomial,
    divisors: &[(Monomial, &BoolPolynomial)],
    order: TermOrder,
) -> BoolPolynomial {
    let mut f = f.clone();
    let mut remainder = Vec::new();
    while let Some(t) = f.leading(order) {
        match divisors.iter().find(|(lm, _)| lm.divides(t)) {
            // u * g has leading monomial t and smaller remaining terms
            Some((lm, g)) => f = f.add(&g.mul_monomial(t.quotient(*lm))),
            None => {
                remainder.push(t);
                f = f.add(&BoolPolynomial::monomial(t));
            }
        }
    }
    BoolPolynomial::from_terms(remainder)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Partner {
    Basis(usize),
    /// The field polynomial `x_v^2 + x_v`.
    Field(usize),
}

/// Buchberger's algorithm in the boolean quotient.
///
/// Pairs are taken by smallest lcm degree first and pairs with coprime
/// leading monomials are skipped. Besides the ordinary S-pairs, every basis
/// element `g` is paired with the field polynomial of each variable `x` of
/// its leading monomial; that S-polynomial reduces to the boolean product
/// `x * g`.
pub fn buchberger(ideal: &BoolIdeal, order: TermOrder) -> GroebnerBasis {
    let mut basis: Vec<(Monomial, BoolPolynomial)> = Vec::new();
    let mut queue: BinaryHeap<Reverse<(usize, usize, Partner)>> = BinaryHeap::new();

    let num_vars = ideal.num_vars();
    let unit = || GroebnerBasis {
        num_vars,
        order,
        polys: vec![BoolPolynomial::one()],
        leading: vec![Monomial::ONE],
    };

    // returns false once the unit ideal is reached
    let insert = |h: BoolPolynomial,
                      basis: &mut Vec<(Monomial, BoolPolynomial)>,
                      queue: &mut BinaryHeap<Reverse<(usize, usize, Partner)>>|
     -> bool {
        let lm = h.leading(order).expect("nonzero");
        if lm == Monomial::ONE {
            return false;
        }
        let idx = basis.len();
        for (j, (other, _)) in basis.iter().enumerate() {
            if !lm.is_coprime(*other) {
                queue.push(Reverse((lm.times(*other).degree(), idx, Partner::Basis(j))));
            }
        }
        for v in lm.vars() {
            queue.push(Reverse((lm.degree(), idx, Partner::Field(v))));
        }
        basis.push((lm, h));
        true
    };

    for g in &ideal.generators {
        let divisors: Vec<_> = basis.iter().map(|(lm, p)| (*lm, p)).collect();
        let h = reduce(g, &divisors, order);
        if !h.is_zero() && !insert(h, &mut basis, &mut queue) {
            return unit();
        }
    }

    while let Some(Reverse((_, i, partner))) = queue.pop() {
        let (lm_i, g_i) = &basis[i];
        let s = match partner {
            Partner::Basis(j) => {
                let (lm_j, g_j) = &basis[j];
                let lcm = lm_i.times(*lm_j);
                g_i.mul_monomial(lcm.quotient(*lm_i))
                    .add(&g_j.mul_monomial(lcm.quotient(*lm_j)))
            }
            Partner::Field(v) => g_i.mul_monomial(Monomial::var(v)),
        };
        let divisors: Vec<_> = basis.iter().map(|(lm, p)| (*lm, p)).collect();
        let h = reduce(&s, &divisors, order);
        if !h.is_zero() && !insert(h, &mut basis, &mut queue) {
            return unit();
        }
    }

    reduce_basis(basis, order, num_vars)
}

fn reduce_basis(
    mut basis: Vec<(Monomial, BoolPolynomial)>,
    order: TermOrder,
    num_vars: usize,
) -> GroebnerBasis {
    // minimal basis: drop elements whose leading monomial is a multiple of
    // another kept leading monomial
    basis.sort_by(|a, b| {
        a.0.degree()
            .cmp(&b.0.degree())
            .then_with(|| order.cmp(a.0, b.0))
    });
    let mut kept: Vec<(Monomial, BoolPolynomial)> = Vec::new();
    for (lm, g) in basis {
        if !kept.iter().any(|(k, _)| k.divides(lm)) {
            kept.push((lm, g));
        }
    }

    let reduced: Vec<(Monomial, BoolPolynomial)> = (0..kept.len())
        .map(|i| {
            let (lm, g) = &kept[i];
            let others: Vec<_> = kept
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, (l, p))| (*l, p))
                .collect();
            let tail = g.add(&BoolPolynomial::monomial(*lm));
            (*lm, reduce(&tail, &others, order).add(&BoolPolynomial::monomial(*lm)))
        })
        .collect();

    let mut reduced = reduced;
    reduced.sort_by(|a, b| order.cmp(b.0, a.0));
    let (leading, polys) = reduced.into_iter().unzip();
    GroebnerBasis {
        num_vars,
        order,
        polys,
        leading,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::{hilbert_function, variety};
    use proptest::prelude::*;

    fn ideal(num_vars: usize, gens: Vec<BoolPolynomial>) -> BoolIdeal {
        BoolIdeal::new(BoolRing::numbered(num_vars).unwrap(), gens)
    }

    fn m(vars: &[usize]) -> Monomial {
        Monomial::from_vars(vars.iter().copied())
    }

    #[test]
    fn normal_form_examples() {
        let x1 = BoolPolynomial::var(0);
        let x1x2 = BoolPolynomial::monomial(m(&[0, 1]));
        assert!(normal_form(&x1x2, &[x1.clone()], TermOrder::Lex).is_zero());
        let g = x1x2.add(&BoolPolynomial::var(2));
        assert!(normal_form(&g, &[g.clone()], TermOrder::Lex).is_zero());
        // x1^2 is x1 in the boolean quotient
        assert_eq!(x1.mul(&x1), x1);
        let x2 = BoolPolynomial::var(1);
        assert_eq!(normal_form(&x2, &[x1], TermOrder::Lex), x2);
    }

    #[test]
    fn single_variable_ideal() {
        let gb = buchberger(&ideal(1, vec![BoolPolynomial::var(0)]), TermOrder::Lex);
        assert_eq!(gb.polys(), &[BoolPolynomial::var(0)]);
    }

    #[test]
    fn quartic_survives() {
        let q = BoolPolynomial::monomial(m(&[0, 1, 2, 3]));
        let gb = buchberger(&ideal(4, vec![q.clone()]), TermOrder::Lex);
        assert_eq!(gb.polys(), &[q]);
        // brute force over the 16 boolean points
        let points = (0u128..16).filter(|&p| p != 15).count();
        assert_eq!(hilbert_function(&gb).total(), points.into());
    }

    #[test]
    fn unit_ideal() {
        // x1 = 1 and x1 = 0
        let gens = vec![
            BoolPolynomial::var(0).add(&BoolPolynomial::one()),
            BoolPolynomial::var(0),
        ];
        let gb = buchberger(&ideal(1, gens), TermOrder::Lex);
        assert!(gb.is_unit());
        assert_eq!(hilbert_function(&gb).total(), 0u32.into());
    }

    #[test]
    fn field_pairs_are_needed() {
        // x1*x2 + x1 = x1*(x2 + 1); with the field relation x2*(x1 x2 + x1) = 0
        // already, but x1*x2 + x2 + x1 needs the x1-multiple: x1 * g = x1, so
        // x1 lies in the ideal.
        let g = BoolPolynomial::from_terms([m(&[0, 1]), m(&[0]), m(&[1])]);
        let gb = buchberger(&ideal(2, vec![g]), TermOrder::Lex);
        assert!(gb.contains(&BoolPolynomial::var(0)));
        assert!(gb.contains(&BoolPolynomial::var(1)));
        assert_eq!(hilbert_function(&gb).total(), 1u32.into());
    }

    fn arb_poly(num_vars: usize) -> impl Strategy<Value = BoolPolynomial> {
        proptest::collection::vec(0u128..(1 << num_vars), 1..4)
            .prop_map(|ts| BoolPolynomial::from_terms(ts.into_iter().map(Monomial)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn basis_is_reduced_unique_and_counts_points(
            gens in proptest::collection::vec(arb_poly(5), 1..5),
            shuffle in any::<u64>(),
            deglex in any::<bool>(),
        ) {
            let order = if deglex { TermOrder::DegLex } else { TermOrder::Lex };
            let id = ideal(5, gens.clone());
            let gb = buchberger(&id, order);
            prop_assert!(gb.is_reduced());
            for g in &gens {
                prop_assert!(gb.contains(g));
            }
            let mut permuted = gens.clone();
            let k = permuted.len();
            permuted.rotate_left((shuffle as usize) % k);
            if shuffle & 1 == 1 {
                permuted.reverse();
            }
            prop_assert_eq!(&buchberger(&ideal(5, permuted), order), &gb);
            // zeros of the generators, by exhaustion
            let points = (0u128..32).filter(|&p| gens.iter().all(|g| !g.evaluate(p))).count();
            prop_assert_eq!(variety(&id).len(), points);
            prop_assert_eq!(hilbert_function(&gb).total(), points.into());
        }
    }
}
