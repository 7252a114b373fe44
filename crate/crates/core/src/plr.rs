//! Partial Latin rectangles, their orthogonal-array form, the isotopism and
//! parastrophism actions, orthogonality, and the direct sum.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::perm::Permutation;
use crate::{Error, Result};

/// An `r x s` array whose cells are empty or hold a symbol of `1..=n`, with
/// no symbol repeated in any row or column.
///
/// Values are immutable once built. The derived ordering compares cells in
/// row-major order with empty cells before every symbol, which is the
/// ordering of the canonical text form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "PlrJson", into = "PlrJson")]
pub struct PartialLatinRectangle {
    rows: usize,
    cols: usize,
    symbols: usize,
    // row-major, 0 = empty
    cells: Vec<u8>,
}

/// The set of `(row, col, symbol)` triples of the filled cells. Rows and
/// columns are 0-based, symbols 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct OrthogonalArray {
    pub triples: BTreeSet<(usize, usize, u8)>,
}

impl OrthogonalArray {
    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }
}

impl PartialLatinRectangle {
    /// The empty `rows x cols` rectangle on `1..=symbols`.
    pub fn empty(rows: usize, cols: usize, symbols: usize) -> Result<Self> {
        check_dims(rows, cols, symbols)?;
        Ok(PartialLatinRectangle {
            rows,
            cols,
            symbols,
            cells: vec![0; rows * cols],
        })
    }

    /// Builds and validates a rectangle from a grid of optional symbols.
    pub fn from_grid(
        rows: usize,
        cols: usize,
        symbols: usize,
        grid: &[Vec<Option<u8>>],
    ) -> Result<Self> {
        check_dims(rows, cols, symbols)?;
        if grid.len() != rows || grid.iter().any(|row| row.len() != cols) {
            return Err(Error::Shape {
                rows,
                cols,
                found_rows: grid.len(),
                found_cols: grid.iter().map(Vec::len).find(|&c| c != cols).unwrap_or(cols),
            });
        }
        let cells = grid
            .iter()
            .flat_map(|row| row.iter().map(|c| c.unwrap_or(0)))
            .collect();
        Self::from_cells(rows, cols, symbols, cells)
    }

    /// Builds and validates a rectangle from row-major cells, `0` marking an
    /// empty cell.
    pub fn from_cells(rows: usize, cols: usize, symbols: usize, cells: Vec<u8>) -> Result<Self> {
        check_dims(rows, cols, symbols)?;
        if cells.len() != rows * cols {
            return Err(Error::Shape {
                rows,
                cols,
                found_rows: cells.len() / cols,
                found_cols: cols,
            });
        }
        let p = PartialLatinRectangle {
            rows,
            cols,
            symbols,
            cells,
        };
        p.validate()?;
        Ok(p)
    }

    /// Trusted constructor for search kernels that maintain the invariants.
    pub(crate) fn from_cells_unchecked(
        rows: usize,
        cols: usize,
        symbols: usize,
        cells: Vec<u8>,
    ) -> Self {
        let p = PartialLatinRectangle {
            rows,
            cols,
            symbols,
            cells,
        };
        debug_assert!(p.validate().is_ok());
        p
    }

    fn validate(&self) -> Result<()> {
        for i in 0..self.rows {
            for j in 0..self.cols {
                let k = self.cells[i * self.cols + j];
                if k == 0 {
                    continue;
                }
                if k as usize > self.symbols {
                    return Err(Error::SymbolOutOfRange {
                        row: i,
                        col: j,
                        symbol: k as usize,
                        bound: self.symbols,
                    });
                }
                if let Some(j0) = (0..j).find(|&j0| self.cells[i * self.cols + j0] == k) {
                    return Err(Error::RepeatedSymbol {
                        symbol: k,
                        first: (i, j0),
                        second: (i, j),
                    });
                }
                if let Some(i0) = (0..i).find(|&i0| self.cells[i0 * self.cols + j] == k) {
                    return Err(Error::RepeatedSymbol {
                        symbol: k,
                        first: (i0, j),
                        second: (i, j),
                    });
                }
            }
        }
        Ok(())
    }

    /// Rebuilds a rectangle from its orthogonal array.
    pub fn from_orthogonal_array(
        rows: usize,
        cols: usize,
        symbols: usize,
        oa: &OrthogonalArray,
    ) -> Result<Self> {
        let mut cells = vec![0u8; rows * cols];
        for &(i, j, k) in &oa.triples {
            if i >= rows || j >= cols {
                return Err(Error::DimensionMismatch(format!(
                    "triple ({i}, {j}, {k}) outside a {rows}x{cols} grid"
                )));
            }
            let cell = &mut cells[i * cols + j];
            if *cell != 0 {
                return Err(Error::RepeatedSymbol {
                    symbol: k,
                    first: (i, j),
                    second: (i, j),
                });
            }
            *cell = k;
        }
        Self::from_cells(rows, cols, symbols, cells)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn symbol_bound(&self) -> usize {
        self.symbols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Option<u8> {
        match self.cells[row * self.cols + col] {
            0 => None,
            k => Some(k),
        }
    }

    /// Row-major cells with `0` for empty.
    pub fn raw_cells(&self) -> &[u8] {
        &self.cells
    }

    pub fn to_grid(&self) -> Vec<Vec<Option<u8>>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// Number of filled cells.
    pub fn size(&self) -> usize {
        self.cells.iter().filter(|&&k| k != 0).count()
    }

    /// Bit `k - 1` is set iff symbol `k` occurs.
    pub fn symbol_support(&self) -> u64 {
        self.cells
            .iter()
            .filter(|&&k| k != 0)
            .fold(0u64, |acc, &k| acc | 1 << (k - 1))
    }

    pub fn distinct_symbols(&self) -> usize {
        self.symbol_support().count_ones() as usize
    }

    /// Same cells, read over a different symbol bound.
    pub fn with_symbol_bound(&self, symbols: usize) -> Result<Self> {
        Self::from_cells(self.rows, self.cols, symbols, self.cells.clone())
    }

    /// Same cells with every occurrence of `symbol` removed.
    pub fn without_symbol(&self, symbol: u8) -> Self {
        let cells = self
            .cells
            .iter()
            .map(|&k| if k == symbol { 0 } else { k })
            .collect();
        Self::from_cells_unchecked(self.rows, self.cols, self.symbols, cells)
    }

    /// Renames symbols to `1, 2, ...` in order of first row-major
    /// appearance. Two rectangles differ by a symbol permutation iff their
    /// relabelings coincide.
    pub fn relabeled_by_first_appearance(&self) -> Self {
        let mut map = [0u8; 256];
        let mut next = 0u8;
        let cells = self
            .cells
            .iter()
            .map(|&k| {
                if k == 0 {
                    0
                } else {
                    if map[k as usize] == 0 {
                        next += 1;
                        map[k as usize] = next;
                    }
                    map[k as usize]
                }
            })
            .collect();
        Self::from_cells_unchecked(self.rows, self.cols, self.symbols, cells)
    }

    pub fn orthogonal_array(&self) -> OrthogonalArray {
        let triples = (0..self.rows)
            .flat_map(|i| (0..self.cols).map(move |j| (i, j)))
            .filter_map(|(i, j)| self.get(i, j).map(|k| (i, j, k)))
            .collect();
        OrthogonalArray { triples }
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn transpose(&self) -> Result<Self> {
        self.require_square()?;
        Ok(self.transpose_unchecked())
    }

    pub(crate) fn transpose_unchecked(&self) -> Self {
        let n = self.rows;
        let mut cells = vec![0u8; n * n];
        for i in 0..n {
            for j in 0..n {
                cells[j * n + i] = self.cells[i * n + j];
            }
        }
        Self::from_cells_unchecked(n, n, self.symbols, cells)
    }

    /// `self` and `other` are orthogonal iff no two distinct cells carry
    /// equal symbols in both. Equivalently, the pairs `(p_ij, q_ij)` over the
    /// cells filled in both are pairwise distinct.
    pub fn is_orthogonal(&self, other: &Self) -> Result<bool> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let width = other.symbols;
        let mut seen = vec![false; self.symbols * width];
        for (&p, &q) in self.cells.iter().zip(&other.cells) {
            if p == 0 || q == 0 {
                continue;
            }
            let slot = &mut seen[(p as usize - 1) * width + q as usize - 1];
            if *slot {
                return Ok(false);
            }
            *slot = true;
        }
        Ok(true)
    }

    /// Orthogonal to its own transpose.
    pub fn is_self_orthogonal(&self) -> Result<bool> {
        self.require_square()?;
        self.is_orthogonal(&self.transpose_unchecked())
    }

    pub fn apply_isotopism(&self, iso: &Isotopism) -> Result<Self> {
        if iso.alpha.degree() != self.rows
            || iso.beta.degree() != self.cols
            || iso.gamma.degree() != self.symbols
        {
            return Err(Error::DimensionMismatch(format!(
                "isotopism of degrees ({}, {}, {}) on a {}x{} rectangle over {} symbols",
                iso.alpha.degree(),
                iso.beta.degree(),
                iso.gamma.degree(),
                self.rows,
                self.cols,
                self.symbols
            )));
        }
        let mut cells = vec![0u8; self.cells.len()];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let k = self.cells[i * self.cols + j];
                if k != 0 {
                    let target = iso.alpha.apply(i) * self.cols + iso.beta.apply(j);
                    cells[target] = iso.gamma.apply(k as usize - 1) as u8 + 1;
                }
            }
        }
        Ok(Self::from_cells_unchecked(
            self.rows,
            self.cols,
            self.symbols,
            cells,
        ))
    }

    /// Permutes the coordinates of every triple of the orthogonal array.
    /// The result has dimensions `(r, s, n)` permuted the same way, so it is
    /// always a valid rectangle; callers compare dimensions when they need
    /// the result to stay in the same set.
    pub fn apply_parastrophism(&self, pi: Parastrophe) -> Result<Self> {
        let dims = [self.rows, self.cols, self.symbols];
        let new_dims = pi.permute(dims);
        if new_dims[2] > u8::MAX as usize {
            return Err(Error::Unsupported(format!(
                "{} symbols after parastrophism",
                new_dims[2]
            )));
        }
        let mut cells = vec![0u8; new_dims[0] * new_dims[1]];
        for &(i, j, k) in &self.orthogonal_array().triples {
            let t = pi.permute([i, j, k as usize - 1]);
            let cell = &mut cells[t[0] * new_dims[1] + t[1]];
            if *cell != 0 {
                return Err(Error::RepeatedSymbol {
                    symbol: (t[2] + 1) as u8,
                    first: (t[0], t[1]),
                    second: (t[0], t[1]),
                });
            }
            *cell = (t[2] + 1) as u8;
        }
        Self::from_cells(new_dims[0], new_dims[1], new_dims[2], cells)
    }

    /// Isotopism first, then parastrophism.
    pub fn apply_paratopism(&self, para: &Paratopism) -> Result<Self> {
        self.apply_isotopism(&para.isotopism)?
            .apply_parastrophism(para.pi)
    }

    /// `self` in the upper-left corner, `other` in the lower-right corner,
    /// empty elsewhere.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        self.require_square()?;
        other.require_square()?;
        if self.symbols != other.symbols {
            return Err(Error::DimensionMismatch(format!(
                "symbol bounds {} and {}",
                self.symbols, other.symbols
            )));
        }
        let (r, r2) = (self.rows, other.rows);
        let n = r + r2;
        let mut cells = vec![0u8; n * n];
        for i in 0..r {
            cells[i * n..i * n + r].copy_from_slice(&self.cells[i * r..(i + 1) * r]);
        }
        for i in 0..r2 {
            let row = (r + i) * n + r;
            cells[row..row + r2].copy_from_slice(&other.cells[i * r2..(i + 1) * r2]);
        }
        Ok(Self::from_cells_unchecked(n, n, self.symbols, cells))
    }

    /// Parses the canonical text form (`1,3,.;2,.,3`), reading symbols over
    /// `1..=symbols`.
    pub fn parse_text(text: &str, symbols: usize) -> Result<Self> {
        let grid = text
            .trim()
            .split(';')
            .map(|row| {
                row.split(',')
                    .map(|cell| match cell.trim() {
                        "." => Ok(None),
                        c => c
                            .parse::<u8>()
                            .map(Some)
                            .map_err(|e| Error::Parse(format!("cell {c:?}: {e}"))),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let rows = grid.len();
        let cols = grid.first().map_or(0, Vec::len);
        Self::from_grid(rows, cols, symbols, &grid)
    }
}

fn check_dims(rows: usize, cols: usize, symbols: usize) -> Result<()> {
    if rows == 0 {
        return Err(Error::ZeroDimension("rows"));
    }
    if cols == 0 {
        return Err(Error::ZeroDimension("columns"));
    }
    if symbols == 0 {
        return Err(Error::ZeroDimension("symbols"));
    }
    if symbols > u8::MAX as usize {
        return Err(Error::Unsupported(format!("{symbols} symbols")));
    }
    Ok(())
}

/// Canonical text form: row-major, cells separated by `,`, rows by `;`,
/// empty cells printed as `.`.
impl fmt::Display for PartialLatinRectangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(";")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(",")?;
                }
                match self.get(i, j) {
                    Some(k) => write!(f, "{k}")?,
                    None => f.write_str(".")?,
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PartialLatinRectangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PLR({}x{} on [{}]: {})",
            self.rows, self.cols, self.symbols, self
        )
    }
}

#[derive(Serialize, Deserialize)]
struct PlrJson {
    r: usize,
    s: usize,
    n: usize,
    cells: Vec<Vec<Option<u8>>>,
}

impl TryFrom<PlrJson> for PartialLatinRectangle {
    type Error = Error;

    fn try_from(j: PlrJson) -> Result<Self> {
        Self::from_grid(j.r, j.s, j.n, &j.cells)
    }
}

impl From<PartialLatinRectangle> for PlrJson {
    fn from(p: PartialLatinRectangle) -> PlrJson {
        PlrJson {
            r: p.rows,
            s: p.cols,
            n: p.symbols,
            cells: p.to_grid(),
        }
    }
}

/// Row, column and symbol permutations `(alpha, beta, gamma)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Isotopism {
    pub alpha: Permutation,
    pub beta: Permutation,
    pub gamma: Permutation,
}

impl Isotopism {
    pub fn new(alpha: Permutation, beta: Permutation, gamma: Permutation) -> Self {
        Isotopism { alpha, beta, gamma }
    }

    /// The isotopisms preserving self-orthogonality: same permutation on
    /// rows and columns.
    pub fn diagonal(alpha: Permutation, gamma: Permutation) -> Self {
        Isotopism {
            beta: alpha.clone(),
            alpha,
            gamma,
        }
    }

    pub fn identity(rows: usize, cols: usize, symbols: usize) -> Self {
        Isotopism {
            alpha: Permutation::identity(rows),
            beta: Permutation::identity(cols),
            gamma: Permutation::identity(symbols),
        }
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Isotopism) -> Isotopism {
        Isotopism {
            alpha: self.alpha.then(&other.alpha),
            beta: self.beta.then(&other.beta),
            gamma: self.gamma.then(&other.gamma),
        }
    }
}

/// A permutation of the three coordinates (row, column, symbol). Applied to
/// a triple `t` it yields `(t[pi(0)], t[pi(1)], t[pi(2)])`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Parastrophe([usize; 3]);

impl Parastrophe {
    pub const IDENTITY: Parastrophe = Parastrophe([0, 1, 2]);
    /// Swaps rows and columns.
    pub const TRANSPOSE: Parastrophe = Parastrophe([1, 0, 2]);

    pub fn new(images: [usize; 3]) -> Result<Self> {
        let mut sorted = images;
        sorted.sort_unstable();
        if sorted != [0, 1, 2] {
            return Err(Error::Precondition(format!(
                "{images:?} is not a permutation of the coordinates"
            )));
        }
        Ok(Parastrophe(images))
    }

    pub fn all() -> [Parastrophe; 6] {
        [
            Parastrophe([0, 1, 2]),
            Parastrophe([0, 2, 1]),
            Parastrophe([1, 0, 2]),
            Parastrophe([1, 2, 0]),
            Parastrophe([2, 0, 1]),
            Parastrophe([2, 1, 0]),
        ]
    }

    #[inline]
    pub fn permute<T: Copy>(self, t: [T; 3]) -> [T; 3] {
        [t[self.0[0]], t[self.0[1]], t[self.0[2]]]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Paratopism {
    pub isotopism: Isotopism,
    pub pi: Parastrophe,
}
