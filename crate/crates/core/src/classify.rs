//! Isotopisms between self-orthogonal rectangles, main classes and orbit
//! sizes.
//!
//! Only isotopisms `(α, α, γ)` are used, together with transposition, so
//! the acting group has order `2 r! s!`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::enumeration::factorial;
use crate::groebner::variety;
use crate::ideals::{decode_extension, ideal_extension};
use crate::strategies::extend_by_new_symbol;
use crate::{Error, Isotopism, PartialLatinRectangle, Permutation, Result};

const UNSET: usize = usize::MAX;

/// All `(α, γ)` with `source^(α, α, γ) = target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsotopismSet {
    pub source: PartialLatinRectangle,
    pub target: PartialLatinRectangle,
    pub symbols: usize,
    pub members: Vec<(Permutation, Permutation)>,
}

impl IsotopismSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

fn check_pair(p: &PartialLatinRectangle, q: &PartialLatinRectangle, symbols: usize) -> Result<()> {
    for x in [p, q] {
        if !x.is_square() {
            return Err(Error::NotSquare {
                rows: x.rows(),
                cols: x.cols(),
            });
        }
        if symbols < 64 && x.symbol_support() >> symbols != 0 {
            return Err(Error::DimensionMismatch(format!("{x} uses symbols beyond {symbols}")));
        }
    }
    if p.rows() != q.rows() {
        return Err(Error::DimensionMismatch(format!("orders {} and {}", p.rows(), q.rows())));
    }
    Ok(())
}

/// Branch over `α` row by row; every filled cell pair forces one value of
/// `γ`, and symbols not occurring are mapped freely at the end.
struct IsoSearch<'a> {
    p: &'a PartialLatinRectangle,
    q: &'a PartialLatinRectangle,
    r: usize,
    alpha: Vec<usize>,
    used_rows: Vec<bool>,
    gamma: Vec<usize>,
    gamma_inv: Vec<usize>,
    assigned: usize,
}

impl<'a> IsoSearch<'a> {
    fn new(p: &'a PartialLatinRectangle, q: &'a PartialLatinRectangle, symbols: usize) -> Self {
        let r = p.rows();
        IsoSearch {
            p,
            q,
            r,
            alpha: vec![UNSET; r],
            used_rows: vec![false; r],
            gamma: vec![UNSET; symbols],
            gamma_inv: vec![UNSET; symbols],
            assigned: 0,
        }
    }

    /// Records `γ(a) = b`; `None` on a conflict, `Some(true)` if new.
    fn bind(&mut self, a: usize, b: usize) -> Option<bool> {
        if self.gamma[a] == b {
            return Some(false);
        }
        if self.gamma[a] != UNSET || self.gamma_inv[b] != UNSET {
            return None;
        }
        self.gamma[a] = b;
        self.gamma_inv[b] = a;
        self.assigned += 1;
        Some(true)
    }

    fn unbind(&mut self, a: usize) {
        self.gamma_inv[self.gamma[a]] = UNSET;
        self.gamma[a] = UNSET;
        self.assigned -= 1;
    }

    /// Checks cells `(i, j)` and `(j, i)` for `j <= i` once `α(i)` is set.
    fn consistent(&mut self, i: usize, bound: &mut Vec<usize>) -> bool {
        for j in 0..=i {
            for (x, y) in [(i, j), (j, i)] {
                if x == y && j != i {
                    continue;
                }
                match (self.p.get(x, y), self.q.get(self.alpha[x], self.alpha[y])) {
                    (None, None) => {}
                    (Some(a), Some(b)) => match self.bind(a as usize - 1, b as usize - 1) {
                        None => return false,
                        Some(true) => bound.push(a as usize - 1),
                        Some(false) => {}
                    },
                    _ => return false,
                }
            }
        }
        true
    }

    fn run(&mut self, i: usize, visit: &mut dyn FnMut(&Self)) {
        if i == self.r {
            visit(self);
            return;
        }
        for a in 0..self.r {
            if self.used_rows[a] {
                continue;
            }
            self.alpha[i] = a;
            self.used_rows[a] = true;
            let mut bound = Vec::new();
            if self.consistent(i, &mut bound) {
                self.run(i + 1, visit);
            }
            for b in bound {
                self.unbind(b);
            }
            self.used_rows[a] = false;
            self.alpha[i] = UNSET;
        }
    }

    fn free_symbols(&self) -> usize {
        self.gamma.len() - self.assigned
    }
}

/// Every isotopism `(α, α, γ)`, `γ ∈ S_symbols`, taking `source` to
/// `target`.
pub fn isotopism_set(
    source: &PartialLatinRectangle,
    target: &PartialLatinRectangle,
    symbols: usize,
) -> Result<IsotopismSet> {
    check_pair(source, target, symbols)?;
    let mut members = Vec::new();
    let mut search = IsoSearch::new(source, target, symbols);
    search.run(0, &mut |st| {
        let alpha = Permutation(st.alpha.clone());
        let domain: Vec<usize> = (0..symbols).filter(|&a| st.gamma[a] == UNSET).collect();
        let images: Vec<usize> = (0..symbols).filter(|&b| st.gamma_inv[b] == UNSET).collect();
        for completion in Permutation::all(domain.len()) {
            let mut gamma = st.gamma.clone();
            for (t, &a) in domain.iter().enumerate() {
                gamma[a] = images[completion.apply(t)];
            }
            members.push((alpha.clone(), Permutation(gamma)));
        }
    });
    Ok(IsotopismSet {
        source: source.clone(),
        target: target.clone(),
        symbols,
        members,
    })
}

/// `|isotopism_set(source, target, symbols)|` without listing the members.
pub fn isotopism_count(
    source: &PartialLatinRectangle,
    target: &PartialLatinRectangle,
    symbols: usize,
) -> Result<BigUint> {
    check_pair(source, target, symbols)?;
    let mut total = BigUint::zero();
    IsoSearch::new(source, target, symbols).run(0, &mut |st| total += factorial(st.free_symbols()));
    Ok(total)
}

/// Whether an isotopism takes `p` to `q` or to the transpose of `q`.
pub fn same_main_class(p: &PartialLatinRectangle, q: &PartialLatinRectangle, symbols: usize) -> Result<bool> {
    check_pair(p, q, symbols)?;
    let mut found = false;
    for target in [q.clone(), q.transpose()?] {
        IsoSearch::new(p, &target, symbols).run(0, &mut |_| found = true);
        if found {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `2 r! s! / (|J(P,P)| + |J(P,P^t)|)`, the size of the main class of `p`.
pub fn burnside_orbit_size(p: &PartialLatinRectangle, symbols: usize) -> Result<BigUint> {
    let (auto, trans) = stabilizer_counts(p, symbols)?;
    orbit_size_from(p.rows(), symbols, &auto, &trans)
}

fn stabilizer_counts(p: &PartialLatinRectangle, symbols: usize) -> Result<(BigUint, BigUint)> {
    Ok((
        isotopism_count(p, p, symbols)?,
        isotopism_count(p, &p.transpose()?, symbols)?,
    ))
}

fn orbit_size_from(rows: usize, symbols: usize, auto: &BigUint, trans: &BigUint) -> Result<BigUint> {
    let group = factorial(rows) * factorial(symbols) * 2u32;
    let stabilizer = auto + trans;
    if stabilizer.is_zero() || !(&group % &stabilizer).is_zero() {
        return Err(Error::Mismatch(format!(
            "stabilizer order {stabilizer} does not divide the group order {group}"
        )));
    }
    Ok(group / stabilizer)
}

/// The least first-appearance relabeling of `p^(α, α, ·)` and its
/// transpose over all `α`: two rectangles share it iff they lie in the same
/// main class.
pub fn main_class_form(p: &PartialLatinRectangle) -> Result<PartialLatinRectangle> {
    if !p.is_square() {
        return Err(Error::NotSquare {
            rows: p.rows(),
            cols: p.cols(),
        });
    }
    let r = p.rows();
    let raw = p.raw_cells();
    let mut best: Option<Vec<u8>> = None;
    let mut cells = vec![0u8; r * r];
    for alpha in Permutation::all(r) {
        for transpose in [false, true] {
            for i in 0..r {
                for j in 0..r {
                    let (x, y) = if transpose { (j, i) } else { (i, j) };
                    cells[alpha.apply(x) * r + alpha.apply(y)] = raw[i * r + j];
                }
            }
            let relabeled = first_appearance(&cells);
            if best.as_ref().is_none_or(|b| relabeled < *b) {
                best = Some(relabeled);
            }
        }
    }
    Ok(PartialLatinRectangle::from_cells_unchecked(
        r,
        r,
        p.symbol_bound(),
        best.unwrap_or_default(),
    ))
}

fn first_appearance(cells: &[u8]) -> Vec<u8> {
    let mut map = [0u8; 256];
    let mut next = 0u8;
    cells
        .iter()
        .map(|&k| {
            if k == 0 {
                return 0;
            }
            if map[k as usize] == 0 {
                next += 1;
                map[k as usize] = next;
            }
            map[k as usize]
        })
        .collect()
}

fn decimal<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// One main class of `SOR_{r,s;s}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MainClass {
    pub representative: PartialLatinRectangle,
    #[serde(serialize_with = "decimal")]
    pub class_size: BigUint,
    #[serde(serialize_with = "decimal")]
    pub autotopism_count: BigUint,
    #[serde(serialize_with = "decimal")]
    pub transpose_isotopism_count: BigUint,
}

/// The main classes of `SOR_{r,s;s}` for one level `s`, ordered by
/// representative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MainClassCatalog {
    pub rows: usize,
    pub level: usize,
    pub classes: Vec<MainClass>,
}

impl MainClassCatalog {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// `σ_{r,s}`, the sum of the class sizes.
    pub fn sigma(&self) -> BigUint {
        self.classes.iter().map(|c| &c.class_size).sum()
    }

    pub fn representatives(&self) -> impl Iterator<Item = &PartialLatinRectangle> {
        self.classes.iter().map(|c| &c.representative)
    }
}

/// How the next symbol is added to a representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExtensionMethod {
    /// Backtracking placement of the new symbol.
    #[default]
    Direct,
    /// Points of the extension ideal's variety.
    Ideal,
}

fn extensions(p: &PartialLatinRectangle, symbol: usize, method: ExtensionMethod) -> Result<Vec<PartialLatinRectangle>> {
    match method {
        ExtensionMethod::Direct => extend_by_new_symbol(p, symbol),
        ExtensionMethod::Ideal => variety(&ideal_extension(p, symbol)?)
            .into_iter()
            .filter(|&point| point != 0)
            .map(|point| decode_extension(p, symbol, point))
            .collect(),
    }
}

/// Catalogs for levels `0..=max_level`, each built from the previous one by
/// adding the next symbol to every representative in all self-orthogonal
/// ways and sorting the results into classes.
///
/// Every main class of a level contains an extension of some previous
/// representative: deleting the largest symbol from any member leaves a
/// member of the previous level, which an isotopism moves onto its
/// representative. Within a class the representative is the least
/// extension in canonical text order.
pub fn main_class_levels(rows: usize, max_level: usize, method: ExtensionMethod) -> Result<Vec<MainClassCatalog>> {
    if rows == 0 {
        return Err(Error::ZeroDimension("rows"));
    }
    let empty = PartialLatinRectangle::empty(rows, rows, 1)?;
    let mut levels = vec![catalog(rows, 0, vec![empty])?];
    for s in 1..=max_level {
        let previous = &levels[s - 1];
        let candidates: Vec<Vec<PartialLatinRectangle>> = previous
            .classes
            .par_iter()
            .map(|c| extensions(&c.representative.with_symbol_bound(s)?, s, method))
            .collect::<Result<_>>()?;
        let mut buckets: BTreeMap<PartialLatinRectangle, Vec<PartialLatinRectangle>> = BTreeMap::new();
        for q in candidates.into_iter().flatten() {
            buckets.entry(main_class_form(&q)?).or_default().push(q);
        }
        let representatives: Vec<PartialLatinRectangle> = buckets
            .into_par_iter()
            .map(|(_, members)| {
                let rep = members.iter().min().cloned().expect("buckets are non-empty");
                for q in &members {
                    if !same_main_class(&rep, q, s)? {
                        return Err(Error::Mismatch(format!(
                            "{q} shares a canonical form with {rep} but no isotopism connects them"
                        )));
                    }
                }
                Ok(rep)
            })
            .collect::<Result<_>>()?;
        levels.push(catalog(rows, s, representatives)?);
    }
    Ok(levels)
}

fn catalog(rows: usize, level: usize, mut representatives: Vec<PartialLatinRectangle>) -> Result<MainClassCatalog> {
    representatives.sort();
    let classes = representatives
        .into_par_iter()
        .map(|rep| {
            let (autotopism_count, transpose_isotopism_count) = stabilizer_counts(&rep, level)?;
            let class_size = orbit_size_from(rows, level, &autotopism_count, &transpose_isotopism_count)?;
            Ok(MainClass {
                representative: rep,
                class_size,
                autotopism_count,
                transpose_isotopism_count,
            })
        })
        .collect::<Result<_>>()?;
    Ok(MainClassCatalog { rows, level, classes })
}

/// The main classes of `SOR_{r,s;s}`.
pub fn main_classes(rows: usize, symbols: usize) -> Result<MainClassCatalog> {
    let mut levels = main_class_levels(rows, symbols, ExtensionMethod::Direct)?;
    Ok(levels.pop().expect("level 0 is always present"))
}

/// Applies `(α, α, γ)` and optionally transposes.
pub fn act(p: &PartialLatinRectangle, alpha: &Permutation, gamma: &Permutation, transpose: bool) -> Result<PartialLatinRectangle> {
    let q = p.apply_isotopism(&Isotopism::diagonal(alpha.clone(), gamma.clone()))?;
    if transpose {
        q.transpose()
    } else {
        Ok(q)
    }
}
