//! Backtracking counters and enumerators: the combinatorial oracles every
//! algebraic computation is checked against, plus the closed-form totals.
//!
//! The kernel visits cells row-major and keeps row/column symbol masks. For
//! self-orthogonality it keeps a table of used pairs `(M(u), M(u^t))`: when
//! cell `(i, j)` with `j <= i` is filled, both pairs at `(i, j)` and
//! `(j, i)` become known, so each placement is checked in O(1).

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::{Error, PartialLatinRectangle, Result, SizeDistribution};

/// Above this many symbols the kernel's `u64` masks no longer fit.
pub const MAX_SYMBOLS: usize = 64;

/// Leaves the exact-symbol counter may spend on its independent
/// cross-checks before skipping them.
pub const DEFAULT_CROSS_CHECK_WORK: u128 = 4_000_000;

#[derive(Debug, Clone, Copy)]
struct SearchParams {
    rows: usize,
    cols: usize,
    symbols: usize,
    self_orthogonal: bool,
    /// Symbols must first appear in the order `1, 2, 3, ...`.
    first_appearance: bool,
    max_size: usize,
}

#[derive(Clone)]
struct Grid {
    p: SearchParams,
    cells: Vec<u8>,
    row_mask: Vec<u64>,
    col_mask: Vec<u64>,
    // pair (a, b) used <=> bit b-1 of pairs[a-1] <=> bit a-1 of pairs_t[b-1]
    pairs: Vec<u64>,
    pairs_t: Vec<u64>,
    diag: u64,
    uses: Vec<u32>,
    size: usize,
    distinct: usize,
}

impl Grid {
    fn new(p: SearchParams) -> Self {
        Grid {
            p,
            cells: vec![0; p.rows * p.cols],
            row_mask: vec![0; p.rows],
            col_mask: vec![0; p.cols],
            pairs: vec![0; p.symbols],
            pairs_t: vec![0; p.symbols],
            diag: 0,
            uses: vec![0; p.symbols],
            size: 0,
            distinct: 0,
        }
    }

    fn num_cells(&self) -> usize {
        self.cells.len()
    }

    /// Symbols (bit `k-1` for symbol `k`) that may go into cell `c`.
    #[inline]
    fn candidates(&self, c: usize) -> u64 {
        if self.size >= self.p.max_size || self.p.symbols == 0 {
            return 0;
        }
        let (i, j) = (c / self.p.cols, c % self.p.cols);
        let mut m = !(self.row_mask[i] | self.col_mask[j]) & low_bits(self.p.symbols);
        if self.p.first_appearance {
            m &= low_bits((self.distinct + 1).min(self.p.symbols));
        }
        if self.p.self_orthogonal {
            if i == j {
                m &= !self.diag;
            } else if j < i {
                let b = self.cells[j * self.p.cols + i];
                if b != 0 {
                    let b = b as usize - 1;
                    m &= !(self.pairs_t[b] | self.pairs[b] | 1 << b);
                }
            }
        }
        m
    }

    #[inline]
    fn place(&mut self, c: usize, k: u8) {
        let (i, j) = (c / self.p.cols, c % self.p.cols);
        let bit = 1u64 << (k - 1);
        self.cells[c] = k;
        self.row_mask[i] |= bit;
        self.col_mask[j] |= bit;
        self.size += 1;
        let u = &mut self.uses[k as usize - 1];
        *u += 1;
        if *u == 1 {
            self.distinct += 1;
        }
        if self.p.self_orthogonal {
            self.toggle_pairs(i, j, k);
        }
    }

    #[inline]
    fn remove(&mut self, c: usize) {
        let k = self.cells[c];
        let (i, j) = (c / self.p.cols, c % self.p.cols);
        let bit = 1u64 << (k - 1);
        if self.p.self_orthogonal {
            self.toggle_pairs(i, j, k);
        }
        self.cells[c] = 0;
        self.row_mask[i] &= !bit;
        self.col_mask[j] &= !bit;
        self.size -= 1;
        let u = &mut self.uses[k as usize - 1];
        *u -= 1;
        if *u == 0 {
            self.distinct -= 1;
        }
    }

    #[inline]
    fn toggle_pairs(&mut self, i: usize, j: usize, k: u8) {
        let a = k as usize - 1;
        if i == j {
            self.diag ^= 1 << a;
            self.pairs[a] ^= 1 << a;
            self.pairs_t[a] ^= 1 << a;
        } else if j < i {
            let b = self.cells[j * self.p.cols + i];
            if b != 0 {
                let b = b as usize - 1;
                self.pairs[a] ^= 1 << b;
                self.pairs_t[b] ^= 1 << a;
                self.pairs[b] ^= 1 << a;
                self.pairs_t[a] ^= 1 << b;
            }
        }
    }

    /// Adds every completion of cells `c..` to `table[distinct][size]`.
    fn count(&mut self, c: usize, table: &mut CountTable) {
        if c == self.num_cells() || self.size == self.p.max_size {
            table.bump(self.distinct, self.size);
            return;
        }
        self.count(c + 1, table);
        let mut m = self.candidates(c);
        while m != 0 {
            let k = m.trailing_zeros() as u8 + 1;
            m &= m - 1;
            self.place(c, k);
            self.count(c + 1, table);
            self.remove(c);
        }
    }

    /// Every assignment of the first `depth` cells, in search order.
    fn prefixes(&mut self, c: usize, depth: usize, out: &mut Vec<Vec<u8>>) {
        if c == depth || self.size == self.p.max_size {
            out.push(self.cells[..c].to_vec());
            return;
        }
        self.prefixes(c + 1, depth, out);
        let mut m = self.candidates(c);
        while m != 0 {
            let k = m.trailing_zeros() as u8 + 1;
            m &= m - 1;
            self.place(c, k);
            self.prefixes(c + 1, depth, out);
            self.remove(c);
        }
    }
}

#[inline]
fn low_bits(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// `table[d][m]`: objects with `d` distinct symbols and size `m`.
#[derive(Clone)]
struct CountTable {
    width: usize,
    data: Vec<u64>,
}

impl CountTable {
    fn new(symbols: usize, cells: usize) -> Self {
        CountTable {
            width: cells + 1,
            data: vec![0; (symbols + 1) * (cells + 1)],
        }
    }

    #[inline]
    fn bump(&mut self, distinct: usize, size: usize) {
        let slot = &mut self.data[distinct * self.width + size];
        *slot = slot.checked_add(1).expect("leaf counter overflow");
    }

    fn rows(&self) -> Vec<Vec<u128>> {
        self.data
            .chunks(self.width)
            .map(|row| row.iter().map(|&c| c as u128).collect())
            .collect()
    }
}

/// Wanted number of independent subtrees for the worker pool.
const TARGET_TASKS: usize = 512;

fn check_params(rows: usize, cols: usize, symbols: usize) -> Result<()> {
    if rows == 0 {
        return Err(Error::ZeroDimension("rows"));
    }
    if cols == 0 {
        return Err(Error::ZeroDimension("columns"));
    }
    if symbols > MAX_SYMBOLS {
        return Err(Error::Unsupported(format!(
            "{symbols} symbols (the search supports at most {MAX_SYMBOLS})"
        )));
    }
    Ok(())
}

/// Runs the kernel, split at a prefix of cells across the rayon pool.
/// Returns `counts[distinct][size]`.
fn search(p: SearchParams) -> Result<Vec<Vec<u128>>> {
    check_params(p.rows, p.cols, p.symbols)?;
    let cells = p.rows * p.cols;
    let mut root = Grid::new(p);
    let mut prefixes = Vec::new();
    let mut depth = 0;
    while depth < cells {
        depth += 1;
        prefixes.clear();
        root.prefixes(0, depth, &mut prefixes);
        if prefixes.len() >= TARGET_TASKS {
            break;
        }
    }
    if depth == 0 {
        prefixes.push(Vec::new());
    }
    let total = prefixes
        .par_iter()
        .map(|prefix| {
            let mut g = Grid::new(p);
            for (c, &k) in prefix.iter().enumerate() {
                if k != 0 {
                    g.place(c, k);
                }
            }
            let mut table = CountTable::new(p.symbols, cells);
            g.count(prefix.len(), &mut table);
            table.rows()
        })
        .reduce(
            || vec![vec![0u128; cells + 1]; p.symbols + 1],
            |mut a, b| {
                for (ra, rb) in a.iter_mut().zip(b) {
                    for (x, y) in ra.iter_mut().zip(rb) {
                        *x += y;
                    }
                }
                a
            },
        );
    Ok(total)
}

fn collapse(table: &[Vec<u128>]) -> SizeDistribution {
    let width = table.first().map_or(0, Vec::len);
    let sums: Vec<u128> = (0..width).map(|m| table.iter().map(|row| row[m]).sum()).collect();
    SizeDistribution::from_u128s(&sums)
}

/// `|R_{r,s,n:m}|` for every size `m` (at most `max_size` when given).
pub fn count_plr_by_size(
    rows: usize,
    cols: usize,
    symbols: usize,
    max_size: Option<usize>,
) -> Result<SizeDistribution> {
    let table = search(SearchParams {
        rows,
        cols,
        symbols,
        self_orthogonal: false,
        first_appearance: false,
        max_size: max_size.unwrap_or(usize::MAX),
    })?;
    Ok(collapse(&table))
}

/// `|SOR_{r,n:m}|` for every size `m` (at most `max_size` when given).
pub fn count_sor_by_size(rows: usize, symbols: usize, max_size: Option<usize>) -> Result<SizeDistribution> {
    let table = search(SearchParams {
        rows,
        cols: rows,
        symbols,
        self_orthogonal: true,
        first_appearance: false,
        max_size: max_size.unwrap_or(usize::MAX),
    })?;
    Ok(collapse(&table))
}

/// Counts of self-orthogonal rectangles in first-appearance form,
/// `table[d][m]` with `d` distinct symbols `1..=d`.
fn first_appearance_table(rows: usize, max_symbols: usize, max_size: Option<usize>) -> Result<Vec<Vec<u128>>> {
    search(SearchParams {
        rows,
        cols: rows,
        symbols: max_symbols,
        self_orthogonal: true,
        first_appearance: true,
        max_size: max_size.unwrap_or(usize::MAX),
    })
}

/// Lazily yields the self-orthogonal `rows x rows` rectangles on
/// `1..=symbols`, in canonical text order.
pub struct SorIter {
    grid: Grid,
    started: bool,
    finished: bool,
}

impl Iterator for SorIter {
    type Item = PartialLatinRectangle;

    fn next(&mut self) -> Option<PartialLatinRectangle> {
        if self.finished {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.current());
        }
        for c in (0..self.grid.num_cells()).rev() {
            if self.advance(c) {
                return Some(self.current());
            }
        }
        self.finished = true;
        None
    }
}

impl SorIter {
    fn current(&self) -> PartialLatinRectangle {
        let p = &self.grid.p;
        PartialLatinRectangle::from_cells_unchecked(p.rows, p.cols, p.symbols, self.grid.cells.clone())
    }

    /// Moves cell `c` to its next admissible value; an exhausted cell is
    /// left empty and `false` returned.
    fn advance(&mut self, c: usize) -> bool {
        let v = self.grid.cells[c];
        if v != 0 {
            self.grid.remove(c);
        }
        let m = self.grid.candidates(c) & !low_bits(v as usize);
        if m == 0 {
            return false;
        }
        self.grid.place(c, m.trailing_zeros() as u8 + 1);
        true
    }
}

/// Streams `SOR_{r,n}` (sizes at most `max_size` when given), each member
/// once, in canonical text order.
pub fn enumerate_sor(rows: usize, symbols: usize, max_size: Option<usize>) -> Result<SorIter> {
    check_params(rows, rows, symbols)?;
    if symbols == 0 {
        return Err(Error::ZeroDimension("symbols"));
    }
    Ok(SorIter {
        grid: Grid::new(SearchParams {
            rows,
            cols: rows,
            symbols,
            self_orthogonal: true,
            first_appearance: false,
            max_size: max_size.unwrap_or(usize::MAX),
        }),
        started: false,
        finished: false,
    })
}

/// How [`count_sor_exact_symbols_by`] counts rectangles using exactly the
/// symbols `1..=s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExactSymbolMethod {
    /// Search first-appearance forms only, then multiply by `s!`.
    FirstAppearance,
    /// Search every rectangle on `1..=s`, keeping those using all symbols.
    SupportTesting,
    /// `Σ_t (-1)^(s-t) C(s,t) |SOR_{r,t}|`.
    InclusionExclusion,
}

/// `σ_{r,s:m}` by one chosen method.
pub fn count_sor_exact_symbols_by(
    rows: usize,
    symbols: usize,
    max_size: Option<usize>,
    method: ExactSymbolMethod,
) -> Result<SizeDistribution> {
    match method {
        ExactSymbolMethod::FirstAppearance => {
            let table = first_appearance_table(rows, symbols, max_size)?;
            Ok(SizeDistribution::from_u128s(&table[symbols]).scaled(&factorial(symbols)))
        }
        ExactSymbolMethod::SupportTesting => {
            let table = search(SearchParams {
                rows,
                cols: rows,
                symbols,
                self_orthogonal: true,
                first_appearance: false,
                max_size: max_size.unwrap_or(usize::MAX),
            })?;
            Ok(SizeDistribution::from_u128s(&table[symbols]))
        }
        ExactSymbolMethod::InclusionExclusion => {
            let mut plus = SizeDistribution::zero();
            let mut minus = SizeDistribution::zero();
            for t in 0..=symbols {
                let term = count_sor_by_size(rows, t, max_size)?.scaled(&binomial(symbols, t));
                if (symbols - t) % 2 == 0 {
                    plus += &term;
                } else {
                    minus += &term;
                }
            }
            let width = plus.len().max(minus.len());
            let counts = (0..width)
                .map(|m| {
                    let (a, b) = (plus.get(m), minus.get(m));
                    if a < b {
                        Err(Error::Mismatch(format!("negative inclusion-exclusion term at size {m}")))
                    } else {
                        Ok(a - b)
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(SizeDistribution::new(counts))
        }
    }
}

/// `σ_{r,s:m}`: self-orthogonal `r x r` rectangles whose symbol support is
/// exactly `1..=s`, by size (at most `max_size` when given).
///
/// The fast first-appearance count is confirmed by both other methods
/// whenever their search stays within `cross_check_work` leaves; any
/// disagreement is an error.
pub fn count_sor_exact_symbols_checked(
    rows: usize,
    symbols: usize,
    max_size: Option<usize>,
    cross_check_work: u128,
) -> Result<SizeDistribution> {
    let table = first_appearance_table(rows, symbols, max_size)?;
    let fast = SizeDistribution::from_u128s(&table[symbols]).scaled(&factorial(symbols));
    // leaves of the support-testing search: each form with d symbols has
    // s!/(s-d)! labelings over 1..=s
    let work: BigUint = table
        .iter()
        .enumerate()
        .map(|(d, row)| BigUint::from(row.iter().sum::<u128>()) * falling(symbols, d))
        .sum();
    if work <= BigUint::from(cross_check_work) {
        for method in [ExactSymbolMethod::SupportTesting, ExactSymbolMethod::InclusionExclusion] {
            let other = count_sor_exact_symbols_by(rows, symbols, max_size, method)?;
            if other != fast {
                return Err(Error::Mismatch(format!(
                    "exact-symbol count r={rows} s={symbols}: first-appearance {fast}, {method:?} {other}"
                )));
            }
        }
    }
    Ok(fast)
}

/// [`count_sor_exact_symbols_checked`] with the default work bound.
pub fn count_sor_exact_symbols(rows: usize, symbols: usize, max_size: Option<usize>) -> Result<SizeDistribution> {
    count_sor_exact_symbols_checked(rows, symbols, max_size, DEFAULT_CROSS_CHECK_WORK)
}

/// `σ_{r,s:m}` for every `s` up to a bound, from a single search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratifiedCounts {
    pub rows: usize,
    pub max_size: Option<usize>,
    /// `sigma_by_size[s]` is the size distribution of `SOR_{r,s;s}`.
    pub sigma_by_size: Vec<SizeDistribution>,
}

impl StratifiedCounts {
    pub fn compute(rows: usize, max_symbols: usize, max_size: Option<usize>) -> Result<Self> {
        let table = first_appearance_table(rows, max_symbols, max_size)?;
        let sigma_by_size = table
            .iter()
            .enumerate()
            .map(|(s, row)| SizeDistribution::from_u128s(row).scaled(&factorial(s)))
            .collect();
        Ok(StratifiedCounts {
            rows,
            max_size,
            sigma_by_size,
        })
    }

    pub fn max_symbols(&self) -> usize {
        self.sigma_by_size.len() - 1
    }

    pub fn sigma_by_size(&self, s: usize) -> SizeDistribution {
        self.sigma_by_size.get(s).cloned().unwrap_or_default()
    }

    pub fn sigma(&self, s: usize) -> BigUint {
        self.sigma_by_size(s).total()
    }

    /// `Σ_s C(n,s) σ_{r,s:m}`, the distribution of `SOR_{r,n}`.
    pub fn combine(&self, symbols: usize) -> Result<SizeDistribution> {
        if symbols > self.max_symbols() {
            return Err(Error::Precondition(format!(
                "stratified counts cover at most {} symbols, asked for {symbols}",
                self.max_symbols()
            )));
        }
        Ok((0..=symbols)
            .map(|s| self.sigma_by_size(s).scaled(&binomial(symbols, s)))
            .sum())
    }
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).map(BigUint::from).product()
}

/// `n (n-1) ... (n-k+1)`.
pub fn falling(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    (n - k + 1..=n).map(BigUint::from).product()
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    falling(n, k) / factorial(k)
}

/// `σ_{r,s}` where a closed form is known: no symbols, all cells filled, at
/// most one empty cell, or more symbols than cells.
///
/// The one-empty-cell case is `(r²)! + (r²-1)! r (r-1) (r-2) (r+1) / 2`:
/// the completed squares plus, per empty cell, the rectangles that cannot be
/// completed with the missing symbol.
pub fn sigma_closed_form(rows: usize, symbols: usize) -> Option<BigUint> {
    let cells = rows * rows;
    if symbols == 0 {
        Some(BigUint::one())
    } else if symbols > cells {
        Some(BigUint::zero())
    } else if symbols == cells {
        Some(factorial(cells))
    } else if symbols + 1 == cells {
        let r = rows as u64;
        // r(r-1)(r-2)(r+1) is a product of consecutive integers, always even
        let extra = factorial(cells - 1) * BigUint::from(r * (r - 1) * (r - 2) * (r + 1) / 2);
        Some(factorial(cells) + extra)
    } else {
        None
    }
}

/// The printed expression `½ (r²+1)! (r³-2r²+r+2) / r` for `σ_{r,r²-1}`,
/// kept only to report how it disagrees with the counts; `None` when it is
/// not an integer.
pub fn sigma_near_full_printed(rows: usize) -> Option<BigUint> {
    let r = rows as u64;
    if r == 0 {
        return None;
    }
    let num = factorial(rows * rows + 1) * BigUint::from(r * r * r - 2 * r * r + r + 2);
    let den = BigUint::from(2 * r);
    (&num % &den).is_zero().then(|| num / den)
}

/// `|SOR_{r,n}|` by the closed-form polynomials, for `r <= 3`.
pub fn sor_total_formula(rows: usize, symbols: usize) -> Result<BigInt> {
    let coefficients: &[i64] = match rows {
        1 => &[1, 1],
        2 => &[1, 0, 5, -2, 1],
        3 => &[1, 1347, -4240, 5640, -4201, 1973, -604, 122, -15, 1],
        _ => {
            return Err(Error::Unsupported(format!(
                "no closed form for |SOR_{{{rows},n}}| (only r = 1, 2, 3)"
            )))
        }
    };
    let n = BigInt::from(symbols);
    // Horner from the leading coefficient
    Ok(coefficients
        .iter()
        .rev()
        .fold(BigInt::zero(), |acc, &c| acc * &n + BigInt::from(c)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::{buchberger, hilbert_function, TermOrder};
    use crate::hamming::HammingGraph;
    use crate::hamming::IndependenceOptions;
    use crate::ideals::ideal_sor;

    fn dist(v: &[u64]) -> SizeDistribution {
        SizeDistribution::from_u64s(v)
    }

    #[test]
    fn plr_examples() {
        assert_eq!(
            count_plr_by_size(3, 3, 3, None).unwrap(),
            dist(&[1, 27, 270, 1278, 3078, 3834, 2412, 756, 108, 12])
        );
        for k in 1..=6 {
            assert_eq!(count_plr_by_size(1, 1, k, None).unwrap(), dist(&[1, k as u64]));
        }
        assert_eq!(count_plr_by_size(2, 2, 2, Some(1)).unwrap(), dist(&[1, 8]));
        assert_eq!(count_plr_by_size(2, 2, 0, None).unwrap(), dist(&[1]));
        assert!(count_plr_by_size(0, 2, 2, None).is_err());
        assert!(count_plr_by_size(1, 1, 65, None).is_err());
    }

    #[test]
    fn sor_examples() {
        assert_eq!(
            count_sor_by_size(3, 3, None).unwrap(),
            dist(&[1, 27, 252, 1014, 1836, 1476, 444, 36])
        );
        assert_eq!(count_sor_by_size(2, 4, None).unwrap(), dist(&[1, 16, 72, 96, 24]));
        assert_eq!(count_sor_by_size(2, 2, None).unwrap(), dist(&[1, 8, 12]));
        assert_eq!(count_sor_by_size(2, 1, None).unwrap(), dist(&[1, 4]));
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(enumerate_sor(1, 1, None).unwrap().count(), 2);
        let all: Vec<_> = enumerate_sor(2, 2, None).unwrap().collect();
        assert_eq!(all.len(), 21);
        assert_eq!(all.iter().filter(|p| p.size() == 2).count(), 12);
        let small: Vec<_> = enumerate_sor(2, 1, Some(1)).unwrap().collect();
        assert_eq!(small.len(), 5);
        assert!(small.iter().all(|p| p.size() <= 1));
        assert!(enumerate_sor(2, 0, None).is_err());
    }

    #[test]
    fn enumeration_is_sorted_unique_and_complete() {
        for (r, n) in [(1, 3), (2, 2), (2, 3), (3, 1), (3, 2)] {
            let all: Vec<_> = enumerate_sor(r, n, None).unwrap().collect();
            assert!(all.windows(2).all(|w| w[0] < w[1]), "r={r} n={n}");
            assert!(all.iter().all(|p| p.is_self_orthogonal().unwrap()));
            assert_eq!(
                BigUint::from(all.len()),
                count_sor_by_size(r, n, None).unwrap().total()
            );
            // and the texts sort the same way
            let texts: Vec<String> = all.iter().map(ToString::to_string).collect();
            assert!(texts.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn enumeration_matches_brute_force_filter() {
        // every 2x2 grid on 3 symbols, filtered
        let mut brute = Vec::new();
        for code in 0..4u32.pow(4) {
            let cells: Vec<u8> = (0..4).map(|c| (code / 4u32.pow(3 - c) % 4) as u8).collect();
            if let Ok(p) = PartialLatinRectangle::from_cells(2, 2, 3, cells) {
                if p.is_self_orthogonal().unwrap() {
                    brute.push(p);
                }
            }
        }
        brute.sort();
        let listed: Vec<_> = enumerate_sor(2, 3, None).unwrap().collect();
        assert_eq!(listed, brute);
    }

    #[test]
    fn exact_symbol_examples() {
        assert_eq!(count_sor_exact_symbols(2, 3, None).unwrap().total(), 24u32.into());
        assert_eq!(count_sor_exact_symbols(3, 1, None).unwrap().total(), 23u32.into());
        for r in 1..=3 {
            assert_eq!(count_sor_exact_symbols(r, 0, None).unwrap(), dist(&[1]));
        }
    }

    #[test]
    fn exact_symbol_methods_agree() {
        for r in 1..=3 {
            for s in 0..=4 {
                for max_size in [None, Some(2)] {
                    let a = count_sor_exact_symbols_by(r, s, max_size, ExactSymbolMethod::FirstAppearance).unwrap();
                    let b = count_sor_exact_symbols_by(r, s, max_size, ExactSymbolMethod::SupportTesting).unwrap();
                    let c = count_sor_exact_symbols_by(r, s, max_size, ExactSymbolMethod::InclusionExclusion).unwrap();
                    assert_eq!(a, b, "r={r} s={s}");
                    assert_eq!(a, c, "r={r} s={s}");
                }
            }
        }
    }

    #[test]
    fn stratified_counts_rebuild_sor() {
        let strata = StratifiedCounts::compute(2, 5, None).unwrap();
        let sigmas: Vec<u64> = (0..=5).map(|s| strata.sigma(s).try_into().unwrap()).collect();
        assert_eq!(sigmas, [1, 4, 12, 24, 24, 0]);
        for n in 0..=5 {
            assert_eq!(strata.combine(n).unwrap(), count_sor_by_size(2, n, None).unwrap());
        }
        assert!(strata.combine(6).is_err());
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(sigma_closed_form(2, 3), Some(24u32.into()));
        assert_eq!(sigma_closed_form(3, 8), Some(846720u32.into()));
        assert_eq!(sigma_closed_form(3, 9), Some(362880u32.into()));
        assert_eq!(sigma_closed_form(3, 10), Some(0u32.into()));
        assert_eq!(sigma_closed_form(3, 0), Some(1u32.into()));
        assert_eq!(sigma_closed_form(3, 5), None);
        assert_eq!(sigma_near_full_printed(2), Some(120u32.into()));
        assert_eq!(sigma_near_full_printed(3), Some(8467200u32.into()));

        assert_eq!(sor_total_formula(2, 5).unwrap(), 501.into());
        assert_eq!(sor_total_formula(3, 1).unwrap(), 24.into());
        assert_eq!(sor_total_formula(1, 7).unwrap(), 8.into());
        assert!(sor_total_formula(4, 1).is_err());
    }

    #[test]
    fn closed_forms_match_small_counts() {
        for r in 1..=2 {
            for s in 0..=r * r + 1 {
                if let Some(v) = sigma_closed_form(r, s) {
                    assert_eq!(count_sor_exact_symbols(r, s, None).unwrap().total(), v, "r={r} s={s}");
                }
            }
        }
        for r in 1..=3 {
            for n in 0..=4 {
                let total = count_sor_by_size(r, n, None).unwrap().total();
                assert_eq!(BigInt::from(total), sor_total_formula(r, n).unwrap(), "r={r} n={n}");
            }
        }
    }

    #[test]
    fn kernel_matches_independence_polynomial() {
        for (r, s, n) in [(1, 2, 3), (2, 2, 2), (2, 3, 3), (3, 3, 3)] {
            let h = HammingGraph::build(r, s, n).unwrap();
            let poly = h.independence_polynomial(&IndependenceOptions::default()).unwrap();
            assert_eq!(count_plr_by_size(r, s, n, None).unwrap(), poly);
        }
    }

    #[test]
    fn kernel_matches_sor_hilbert_function() {
        for n in 1..=2 {
            let gb = buchberger(&ideal_sor(2, n).unwrap(), TermOrder::Lex);
            assert_eq!(hilbert_function(&gb).function, count_sor_by_size(2, n, None).unwrap());
        }
    }

    #[test]
    fn size_bound_truncates() {
        let full = count_sor_by_size(3, 3, None).unwrap();
        for m in 0..=8 {
            assert_eq!(count_sor_by_size(3, 3, Some(m)).unwrap(), full.truncated(m));
        }
    }

    #[test]
    fn combinatorial_helpers() {
        assert_eq!(binomial(9, 3), 84u32.into());
        assert_eq!(binomial(3, 4), 0u32.into());
        assert_eq!(falling(9, 0), 1u32.into());
        assert_eq!(factorial(0), 1u32.into());
    }
}
