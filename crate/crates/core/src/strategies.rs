//! Two ways of counting `SOR_{r,n}` by size without a single global
//! search: splitting the square into diagonal corners, and stratifying by
//! the number of distinct symbols.

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::enumeration::{enumerate_sor, falling, StratifiedCounts};
use crate::groebner::{buchberger, hilbert_function, TermOrder};
use crate::hamming::independence_coefficients;
use crate::ideals::ideal_corner_c;
use crate::{Error, PartialLatinRectangle, Result, SizeDistribution};

/// Every self-orthogonal extension of `base` that places the symbol
/// `symbol` in at least one empty cell, in canonical text order.
///
/// `base` must be self-orthogonal and use exactly the symbols `1..symbol`.
pub fn extend_by_new_symbol(base: &PartialLatinRectangle, symbol: usize) -> Result<Vec<PartialLatinRectangle>> {
    if !base.is_self_orthogonal()? {
        return Err(Error::Precondition(format!("{base} is not self-orthogonal")));
    }
    if symbol == 0 || symbol > 64 || base.symbol_support() != (1u64 << (symbol - 1)) - 1 {
        return Err(Error::Precondition(format!(
            "{base} does not use exactly the symbols 1..{symbol}"
        )));
    }
    let r = base.rows();
    let bound = base.symbol_bound().max(symbol);
    let empty: Vec<usize> = (0..r * r).filter(|&c| base.raw_cells()[c] == 0).collect();
    let mut cells = base.raw_cells().to_vec();
    let mut out = Vec::new();
    // rows and columns already holding the new symbol
    fn place(
        t: usize,
        empty: &[usize],
        r: usize,
        used: (u64, u64),
        cells: &mut Vec<u8>,
        symbol: u8,
        bound: usize,
        out: &mut Vec<PartialLatinRectangle>,
    ) -> Result<()> {
        if t == empty.len() {
            if used.0 != 0 {
                let q = PartialLatinRectangle::from_cells(r, r, bound, cells.clone())?;
                if q.is_self_orthogonal()? {
                    out.push(q);
                }
            }
            return Ok(());
        }
        let (i, j) = (empty[t] / r, empty[t] % r);
        place(t + 1, empty, r, used, cells, symbol, bound, out)?;
        if used.0 >> i & 1 == 0 && used.1 >> j & 1 == 0 {
            cells[empty[t]] = symbol;
            place(t + 1, empty, r, (used.0 | 1 << i, used.1 | 1 << j), cells, symbol, bound, out)?;
            cells[empty[t]] = 0;
        }
        Ok(())
    }
    place(0, &empty, r, (0, 0), &mut cells, symbol as u8, bound, &mut out)?;
    out.sort();
    Ok(out)
}

/// The split `(r, r')` with `r' = floor(order / 2)`.
pub fn default_split(order: usize) -> (usize, usize) {
    (order - order / 2, order / 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DirectSumOptions {
    /// Visit the corner pairs only up to renaming symbols, weighting each by
    /// the number of renamings.
    pub reduce_symbols: bool,
    /// Count lower-left blocks by the Hilbert function of their ideal
    /// instead of by search. Only sensible for tiny instances.
    pub corner_c_by_ideal: bool,
}

/// The pairs `(P, Q)` of self-orthogonal corners whose direct sum is
/// self-orthogonal.
pub fn corner_pairs(r: usize, r2: usize, symbols: usize) -> Result<Vec<(PartialLatinRectangle, PartialLatinRectangle)>> {
    let uppers: Vec<_> = enumerate_sor(r, symbols, None)?.collect();
    let lowers: Vec<_> = enumerate_sor(r2, symbols, None)?.collect();
    let mut pairs = Vec::new();
    for p in &uppers {
        for q in &lowers {
            if p.direct_sum(q)?.is_self_orthogonal()? {
                pairs.push((p.clone(), q.clone()));
            }
        }
    }
    Ok(pairs)
}

/// Upper-right blocks keeping `upper ⊕ lower` a partial Latin rectangle.
pub fn corner_b_blocks(upper: &PartialLatinRectangle, lower: &PartialLatinRectangle) -> Result<Vec<PartialLatinRectangle>> {
    let (r, r2, n) = (upper.rows(), lower.rows(), upper.symbol_bound());
    let row_masks: Vec<u64> = (0..r).map(|i| line_mask((0..r).map(|j| upper.get(i, j)))).collect();
    let col_masks: Vec<u64> = (0..r2).map(|j| line_mask((0..r2).map(|i| lower.get(i, j)))).collect();
    let mut out = Vec::new();
    let mut cells = vec![0u8; r * r2];
    let full = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
    fn go(
        c: usize,
        dims: (usize, usize, usize),
        masks: (&[u64], &[u64]),
        rows: &mut Vec<u64>,
        cols: &mut Vec<u64>,
        cells: &mut Vec<u8>,
        full: u64,
        out: &mut Vec<PartialLatinRectangle>,
    ) {
        let (r, r2, n) = dims;
        if c == r * r2 {
            out.push(PartialLatinRectangle::from_cells_unchecked(r, r2, n, cells.clone()));
            return;
        }
        go(c + 1, dims, masks, rows, cols, cells, full, out);
        let (i, j) = (c / r2, c % r2);
        let mut m = full & !(masks.0[i] | masks.1[j] | rows[i] | cols[j]);
        while m != 0 {
            let bit = m & m.wrapping_neg();
            m ^= bit;
            cells[c] = bit.trailing_zeros() as u8 + 1;
            rows[i] |= bit;
            cols[j] |= bit;
            go(c + 1, dims, masks, rows, cols, cells, full, out);
            rows[i] ^= bit;
            cols[j] ^= bit;
        }
        cells[c] = 0;
    }
    go(
        0,
        (r, r2, n),
        (&row_masks, &col_masks),
        &mut vec![0; r],
        &mut vec![0; r2],
        &mut cells,
        full,
        &mut out,
    );
    Ok(out)
}

fn line_mask(line: impl Iterator<Item = Option<u8>>) -> u64 {
    line.flatten().fold(0, |m, k| m | 1 << (k - 1))
}

/// Size distribution of the lower-left blocks completing `upper ⊕ lower`
/// with upper-right block `block` to a self-orthogonal rectangle.
///
/// The admissible blocks are the independent sets of a graph on the
/// triples `(cell, symbol)`: each constraint is either a forbidden triple
/// or a forbidden pair of triples.
pub fn corner_c_distribution(
    upper: &PartialLatinRectangle,
    lower: &PartialLatinRectangle,
    block: &PartialLatinRectangle,
) -> Result<SizeDistribution> {
    let (r, r2, n) = (upper.rows(), lower.rows(), upper.symbol_bound());
    if r2 * r * n > 128 {
        return Err(Error::Capacity {
            what: format!("lower-left block graph on {} vertices", r2 * r * n),
            subproblems: (r2 * r * n) as u64,
        });
    }
    let sum = upper.direct_sum(lower)?;
    let m = r + r2;
    // pairs (M(u), M(u^t)) already used by the diagonal corners
    let mut pairs = vec![0u64; n + 1];
    for i in 0..m {
        for j in 0..m {
            if let (Some(a), Some(b)) = (sum.get(i, j), sum.get(j, i)) {
                pairs[a as usize] |= 1 << b;
            }
        }
    }
    let col_upper: Vec<u64> = (0..r).map(|j| line_mask((0..r).map(|i| upper.get(i, j)))).collect();
    let row_lower: Vec<u64> = (0..r2).map(|i| line_mask((0..r2).map(|j| lower.get(i, j)))).collect();
    let vertex = |i: usize, j: usize, k: usize| (i * r + j) * n + k - 1;
    let mirror = |i: usize, j: usize| block.get(j, i);

    let mut allowed = 0u128;
    for i in 0..r2 {
        for j in 0..r {
            for k in 1..=n {
                let bit = 1u64 << (k - 1);
                let blocked = col_upper[j] & bit != 0
                    || row_lower[i] & bit != 0
                    || mirror(i, j).is_some_and(|a| a as usize == k || pairs[a as usize] >> k & 1 == 1);
                if !blocked {
                    allowed |= 1 << vertex(i, j, k);
                }
            }
        }
    }
    let mut adj = vec![0u128; r2 * r * n];
    let mut edge = |u: usize, v: usize| {
        if u != v {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
    };
    let cells: Vec<(usize, usize)> = (0..r2).flat_map(|i| (0..r).map(move |j| (i, j))).collect();
    for &(i, j) in &cells {
        for &(i2, j2) in &cells {
            if (i, j) == (i2, j2) {
                for k in 1..=n {
                    for k2 in k + 1..=n {
                        edge(vertex(i, j, k), vertex(i, j, k2));
                    }
                }
                continue;
            }
            let same_line = i == i2 || j == j2;
            let (a, b) = (mirror(i, j), mirror(i2, j2));
            for k in 1..=n {
                if same_line || (a.is_some() && a == b) {
                    edge(vertex(i, j, k), vertex(i2, j2, k));
                }
            }
            if let (Some(a), Some(b)) = (a, b) {
                if a != b {
                    edge(vertex(i, j, b as usize), vertex(i2, j2, a as usize));
                }
            }
        }
    }
    Ok(SizeDistribution::from_u128s(&independence_coefficients(&adj, allowed)))
}

fn corner_c_by_ideal(
    upper: &PartialLatinRectangle,
    lower: &PartialLatinRectangle,
    block: &PartialLatinRectangle,
) -> Result<SizeDistribution> {
    let basis = buchberger(&ideal_corner_c(upper, lower, block)?, TermOrder::Lex);
    Ok(hilbert_function(&basis).function)
}

/// Size distribution of `SOR_{r+r',n}` assembled from the diagonal corners
/// `P` (`r x r`) and `Q` (`r' x r'`), the upper-right block `B` and the
/// lower-left block `C`: the sum of `t^(|P|+|Q|+|B|)` times the size
/// distribution of the admissible `C`.
pub fn sor_distribution_direct_sum(r: usize, r2: usize, symbols: usize) -> Result<SizeDistribution> {
    sor_distribution_direct_sum_with(r, r2, symbols, DirectSumOptions::default())
}

pub fn sor_distribution_direct_sum_with(
    r: usize,
    r2: usize,
    symbols: usize,
    options: DirectSumOptions,
) -> Result<SizeDistribution> {
    if r == 0 || r2 == 0 {
        return Err(Error::ZeroDimension("corner order"));
    }
    if symbols == 0 {
        return Ok(SizeDistribution::one());
    }
    let mut pairs = corner_pairs(r, r2, symbols)?;
    let mut weights = vec![BigUint::from(1u32); pairs.len()];
    if options.reduce_symbols {
        let mut reduced = Vec::new();
        weights.clear();
        for (p, q) in pairs {
            let sum = p.direct_sum(&q)?;
            if sum.relabeled_by_first_appearance() == sum {
                weights.push(falling(symbols, sum.distinct_symbols()));
                reduced.push((p, q));
            }
        }
        pairs = reduced;
    }
    pairs
        .par_iter()
        .zip(weights.par_iter())
        .map(|((p, q), weight)| {
            let mut acc = SizeDistribution::zero();
            for b in corner_b_blocks(p, q)? {
                let c = if options.corner_c_by_ideal {
                    corner_c_by_ideal(p, q, &b)?
                } else {
                    corner_c_distribution(p, q, &b)?
                };
                acc += &c.shifted(p.size() + q.size() + b.size());
            }
            Ok(acc.scaled(weight))
        })
        .try_reduce(SizeDistribution::zero, |a, b| Ok(a + b))
}

/// `Σ_s C(n,s) σ_{r,s:m}` with the `σ` counted by a first-appearance
/// search, sizes capped at `max_size` when given.
pub fn sor_distribution_stratified(rows: usize, symbols: usize, max_size: Option<usize>) -> Result<SizeDistribution> {
    StratifiedCounts::compute(rows, symbols, max_size)?.combine(symbols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::{count_sor_by_size, count_sor_exact_symbols};
    use crate::groebner::variety;
    use crate::ideals::{decode_extension, ideal_corner_b, ideal_extension, PlrEncoding};
    use std::collections::BTreeSet;

    fn plr(text: &str, n: usize) -> PartialLatinRectangle {
        PartialLatinRectangle::parse_text(text, n).unwrap()
    }

    fn dist(v: &[u64]) -> SizeDistribution {
        SizeDistribution::from_u64s(v)
    }

    #[test]
    fn extension_examples() {
        let e = PartialLatinRectangle::empty(1, 1, 1).unwrap();
        let ext = extend_by_new_symbol(&e, 1).unwrap();
        assert_eq!(ext, vec![plr("1", 1)]);
        let e = PartialLatinRectangle::empty(2, 2, 1).unwrap();
        assert_eq!(extend_by_new_symbol(&e, 1).unwrap().len(), 4);
        let e = PartialLatinRectangle::empty(3, 3, 1).unwrap();
        assert_eq!(extend_by_new_symbol(&e, 1).unwrap().len(), 23);
        assert!(extend_by_new_symbol(&plr("2,.;.,.", 2), 2).is_err());
        assert!(extend_by_new_symbol(&plr("1,.;.,1", 1), 2).is_err());
    }

    #[test]
    fn extensions_match_the_ideal_and_cover_each_level() {
        for s in 1..=4 {
            let mut union = BTreeSet::new();
            let bases = enumerate_sor(2, s, None).unwrap().filter(|p| p.distinct_symbols() + 1 == s && p.symbol_support() == (1 << (s - 1)) - 1);
            for base in bases {
                let direct = extend_by_new_symbol(&base, s).unwrap();
                let ideal: BTreeSet<_> = variety(&ideal_extension(&base, s).unwrap())
                    .into_iter()
                    .filter(|&x| x != 0)
                    .map(|x| decode_extension(&base, s, x).unwrap())
                    .collect();
                assert_eq!(direct.iter().cloned().collect::<BTreeSet<_>>(), ideal, "{base}");
                union.extend(direct);
            }
            let exact: BTreeSet<_> = enumerate_sor(2, s, None)
                .unwrap()
                .filter(|p| p.symbol_support() == (1 << s) - 1)
                .collect();
            assert_eq!(union, exact, "s={s}");
        }
    }

    #[test]
    fn direct_sum_examples() {
        assert_eq!(sor_distribution_direct_sum(1, 1, 1).unwrap(), dist(&[1, 4]));
        assert_eq!(sor_distribution_direct_sum(1, 1, 2).unwrap(), dist(&[1, 8, 12]));
        assert!(sor_distribution_direct_sum(0, 1, 2).is_err());
    }

    #[test]
    fn corner_b_blocks_match_the_ideal() {
        for (p, q) in corner_pairs(1, 2, 2).unwrap() {
            let enc = PlrEncoding::new(1, 2, 2).unwrap();
            let ideal: BTreeSet<_> = variety(&ideal_corner_b(&p, &q).unwrap())
                .into_iter()
                .map(|x| enc.decode(x).unwrap())
                .collect();
            let blocks: BTreeSet<_> = corner_b_blocks(&p, &q).unwrap().into_iter().collect();
            assert_eq!(blocks, ideal);
        }
    }

    #[test]
    fn corner_c_search_matches_hilbert_function() {
        for (r, r2, n) in [(1, 1, 2), (1, 1, 3), (1, 2, 2), (2, 1, 2)] {
            let plain = sor_distribution_direct_sum(r, r2, n).unwrap();
            let options = DirectSumOptions {
                corner_c_by_ideal: true,
                ..Default::default()
            };
            assert_eq!(plain, sor_distribution_direct_sum_with(r, r2, n, options).unwrap());
        }
    }

    #[test]
    fn direct_sum_matches_search() {
        for (r, r2) in [(1, 1), (1, 2), (2, 1)] {
            for n in 1..=4 {
                assert_eq!(
                    sor_distribution_direct_sum(r, r2, n).unwrap(),
                    count_sor_by_size(r + r2, n, None).unwrap(),
                    "{r}+{r2}, n={n}"
                );
            }
        }
    }

    #[test]
    fn symbol_reduction_matches_plain_mode() {
        for (r, r2) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            for n in 1..=3 {
                let options = DirectSumOptions {
                    reduce_symbols: true,
                    ..Default::default()
                };
                assert_eq!(
                    sor_distribution_direct_sum_with(r, r2, n, options).unwrap(),
                    sor_distribution_direct_sum(r, r2, n).unwrap()
                );
            }
        }
    }

    #[test]
    fn stratified_examples() {
        assert_eq!(sor_distribution_stratified(2, 9, None).unwrap().total(), 5509u32.into());
        assert_eq!(sor_distribution_stratified(3, 0, None).unwrap(), dist(&[1]));
        assert_eq!(
            sor_distribution_stratified(4, 9, Some(3)).unwrap().get(3),
            343224u32.into()
        );
    }

    #[test]
    fn disjoint_union_by_support() {
        for r in 1..=2 {
            for n in 0..=4 {
                let mut by_support = BigUint::from(0u32);
                for s in 0..=n {
                    by_support += crate::enumeration::binomial(n, s) * count_sor_exact_symbols(r, s, None).unwrap().total();
                }
                assert_eq!(by_support, count_sor_by_size(r, n, None).unwrap().total());
            }
        }
    }
}
