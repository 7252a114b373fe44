//! Constructors turning combinatorial descriptions into boolean ideals.
//!
//! Rectangles are encoded by variables `x_{ijk}` (cell `(i, j)` holds `k`),
//! numbered row-major with the symbol varying fastest, so under the lex
//! order `x_{111} > x_{112} > ... `.

use std::collections::HashSet;

use crate::groebner::{BoolIdeal, BoolPolynomial, BoolRing, Monomial};
use crate::perm::Permutation;
use crate::{Error, PartialLatinRectangle, Result};

/// Variable layout for an `rows x cols` grid over `symbols` symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlrEncoding {
    pub rows: usize,
    pub cols: usize,
    pub symbols: usize,
}

impl PlrEncoding {
    pub fn new(rows: usize, cols: usize, symbols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 || symbols == 0 {
            return Err(Error::ZeroDimension("ideal parameter"));
        }
        Ok(PlrEncoding {
            rows,
            cols,
            symbols,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.rows * self.cols * self.symbols
    }

    /// Index of `x_{ijk}` for 0-based row and column and 1-based symbol.
    #[inline]
    pub fn var(&self, row: usize, col: usize, symbol: usize) -> usize {
        (row * self.cols + col) * self.symbols + symbol - 1
    }

    pub fn ring(&self) -> Result<BoolRing> {
        let wide = self.rows.max(self.cols).max(self.symbols) > 9;
        let mut labels = Vec::with_capacity(self.num_vars());
        for i in 1..=self.rows {
            for j in 1..=self.cols {
                for k in 1..=self.symbols {
                    labels.push(if wide {
                        format!("x_{{{i},{j},{k}}}")
                    } else {
                        format!("x_{{{i}{j}{k}}}")
                    });
                }
            }
        }
        BoolRing::new(labels)
    }

    /// The rectangle of a 0/1 point, validated.
    pub fn decode(&self, point: u128) -> Result<PartialLatinRectangle> {
        let mut cells = vec![0u8; self.rows * self.cols];
        for v in crate::hamming::bits(point) {
            let cell = &mut cells[v / self.symbols];
            if *cell != 0 {
                return Err(Error::Precondition(format!(
                    "point sets two symbols in cell {}",
                    v / self.symbols
                )));
            }
            *cell = (v % self.symbols + 1) as u8;
        }
        PartialLatinRectangle::from_cells(self.rows, self.cols, self.symbols, cells)
    }

    pub fn encode(&self, p: &PartialLatinRectangle) -> u128 {
        let mut point = 0u128;
        for (i, j, k) in p.orthogonal_array().triples {
            point |= 1 << self.var(i, j, k as usize);
        }
        point
    }

    /// Standard monomial / variety point of a rectangle, as a monomial.
    pub fn monomial(&self, p: &PartialLatinRectangle) -> Monomial {
        Monomial(self.encode(p))
    }
}

/// Every ideal family, with its parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdealSpec {
    Plr {
        rows: usize,
        cols: usize,
        symbols: usize,
    },
    Sor {
        rows: usize,
        symbols: usize,
    },
    Isotopism {
        source: PartialLatinRectangle,
        target: PartialLatinRectangle,
        symbols: usize,
    },
    CornerB {
        upper: PartialLatinRectangle,
        lower: PartialLatinRectangle,
    },
    CornerC {
        upper: PartialLatinRectangle,
        lower: PartialLatinRectangle,
        block: PartialLatinRectangle,
    },
    Extension {
        base: PartialLatinRectangle,
        symbol: usize,
    },
}

impl IdealSpec {
    pub fn build(&self) -> Result<BoolIdeal> {
        match self {
            IdealSpec::Plr {
                rows,
                cols,
                symbols,
            } => ideal_plr(*rows, *cols, *symbols),
            IdealSpec::Sor { rows, symbols } => ideal_sor(*rows, *symbols),
            IdealSpec::Isotopism {
                source,
                target,
                symbols,
            } => ideal_isotopism(source, target, *symbols),
            IdealSpec::CornerB { upper, lower } => ideal_corner_b(upper, lower),
            IdealSpec::CornerC {
                upper,
                lower,
                block,
            } => ideal_corner_c(upper, lower, block),
            IdealSpec::Extension { base, symbol } => ideal_extension(base, *symbol),
        }
    }
}

/// Collects monomial generators, skipping repeats.
#[derive(Default)]
struct MonomialGenerators {
    seen: HashSet<Monomial>,
    list: Vec<BoolPolynomial>,
}

impl MonomialGenerators {
    fn push(&mut self, m: Monomial) {
        if self.seen.insert(m) {
            self.list.push(BoolPolynomial::monomial(m));
        }
    }

    fn push_vars(&mut self, vars: &[usize]) {
        self.push(Monomial::from_vars(vars.iter().copied()));
    }
}

fn plr_generators(enc: &PlrEncoding, gens: &mut MonomialGenerators) {
    let (r, s, n) = (enc.rows, enc.cols, enc.symbols);
    for i in 0..r {
        for j in 0..s {
            for k in 1..=n {
                let v = enc.var(i, j, k);
                for i2 in i + 1..r {
                    gens.push_vars(&[v, enc.var(i2, j, k)]);
                }
                for j2 in j + 1..s {
                    gens.push_vars(&[v, enc.var(i, j2, k)]);
                }
                for k2 in k + 1..=n {
                    gens.push_vars(&[v, enc.var(i, j, k2)]);
                }
            }
        }
    }
}

/// Zeros are the `rows x cols` partial Latin rectangles on `symbols`
/// symbols: one quadratic monomial per edge of the Hamming graph.
pub fn ideal_plr(rows: usize, cols: usize, symbols: usize) -> Result<BoolIdeal> {
    let enc = PlrEncoding::new(rows, cols, symbols)?;
    let ring = enc.ring()?;
    let mut gens = MonomialGenerators::default();
    plr_generators(&enc, &mut gens);
    Ok(BoolIdeal::new(ring, gens.list))
}

/// Zeros are the self-orthogonal `rows x rows` rectangles: the rectangle
/// ideal plus `x_{ijp} x_{klp} x_{jiq} x_{lkq}` for distinct cells
/// `(i, j) != (k, l)` and all symbols `p, q` (including `p = q`), with
/// coinciding monomials kept once.
pub fn ideal_sor(rows: usize, symbols: usize) -> Result<BoolIdeal> {
    let enc = PlrEncoding::new(rows, rows, symbols)?;
    let ring = enc.ring()?;
    let mut gens = MonomialGenerators::default();
    plr_generators(&enc, &mut gens);
    let cells: Vec<(usize, usize)> = (0..rows)
        .flat_map(|i| (0..rows).map(move |j| (i, j)))
        .collect();
    for &(i, j) in &cells {
        for &(k, l) in &cells {
            if (i, j) == (k, l) {
                continue;
            }
            for p in 1..=symbols {
                for q in 1..=symbols {
                    gens.push_vars(&[
                        enc.var(i, j, p),
                        enc.var(k, l, p),
                        enc.var(j, i, q),
                        enc.var(l, k, q),
                    ]);
                }
            }
        }
    }
    Ok(BoolIdeal::new(ring, gens.list))
}

/// Variable layout of the isotopism ideal: `x_{ij}` (row map sends `i` to
/// `j`) then `y_{ij}` (symbol map sends `i` to `j`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IsotopismEncoding {
    pub order: usize,
    pub symbols: usize,
}

impl IsotopismEncoding {
    pub fn x(&self, i: usize, j: usize) -> usize {
        i * self.order + j
    }

    /// 0-based symbols.
    pub fn y(&self, i: usize, j: usize) -> usize {
        self.order * self.order + i * self.symbols + j
    }

    pub fn num_vars(&self) -> usize {
        self.order * self.order + self.symbols * self.symbols
    }

    pub fn ring(&self) -> Result<BoolRing> {
        let mut labels = Vec::with_capacity(self.num_vars());
        for i in 1..=self.order {
            for j in 1..=self.order {
                labels.push(format!("x_{{{i}{j}}}"));
            }
        }
        for i in 1..=self.symbols {
            for j in 1..=self.symbols {
                labels.push(format!("y_{{{i}{j}}}"));
            }
        }
        BoolRing::new(labels)
    }

    /// Row and symbol permutations of a variety point.
    pub fn decode(&self, point: u128) -> Result<(Permutation, Permutation)> {
        let read = |size: usize, var: &dyn Fn(usize, usize) -> usize| {
            let images = (0..size)
                .map(|i| {
                    (0..size)
                        .find(|&j| point >> var(i, j) & 1 == 1)
                        .ok_or_else(|| Error::Precondition(format!("row {i} of a permutation matrix is empty")))
                })
                .collect::<Result<Vec<_>>>()?;
            Permutation::from_images(images)
        };
        Ok((
            read(self.order, &|i, j| self.x(i, j))?,
            read(self.symbols, &|i, j| self.y(i, j))?,
        ))
    }
}

/// Zeros are the pairs `(alpha, gamma)` with `source^(alpha, alpha, gamma)
/// = target`.
pub fn ideal_isotopism(
    source: &PartialLatinRectangle,
    target: &PartialLatinRectangle,
    symbols: usize,
) -> Result<BoolIdeal> {
    for p in [source, target] {
        if !p.is_square() {
            return Err(Error::NotSquare {
                rows: p.rows(),
                cols: p.cols(),
            });
        }
        if p.symbol_support() >> symbols != 0 {
            return Err(Error::DimensionMismatch(format!(
                "{p} uses symbols beyond {symbols}"
            )));
        }
    }
    if source.rows() != target.rows() {
        return Err(Error::DimensionMismatch(format!(
            "orders {} and {}",
            source.rows(),
            target.rows()
        )));
    }
    let r = source.rows();
    let enc = IsotopismEncoding { order: r, symbols };
    let ring = enc.ring()?;
    let one = BoolPolynomial::one();
    let mut gens = Vec::new();
    let mut seen = HashSet::new();
    let mut push = |g: BoolPolynomial, gens: &mut Vec<BoolPolynomial>| {
        if !g.is_zero() && seen.insert(g.clone()) {
            gens.push(g);
        }
    };
    // permutation matrices: each row and column sums to one
    for (size, var) in [
        (r, &(|i, j| enc.x(i, j)) as &dyn Fn(usize, usize) -> usize),
        (symbols, &|i, j| enc.y(i, j)),
    ] {
        for i in 0..size {
            let row = BoolPolynomial::from_terms((0..size).map(|j| Monomial::var(var(i, j))));
            push(row.add(&one), &mut gens);
            let col = BoolPolynomial::from_terms((0..size).map(|j| Monomial::var(var(j, i))));
            push(col.add(&one), &mut gens);
            // odd sums alone admit three ones in a line
            for j in 0..size {
                for k in j + 1..size {
                    for (a, b) in [(var(i, j), var(i, k)), (var(j, i), var(k, i))] {
                        push(
                            BoolPolynomial::monomial(Monomial::var(a).times(Monomial::var(b))),
                            &mut gens,
                        );
                    }
                }
            }
        }
    }
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                for l in 0..r {
                    let cells = Monomial::var(enc.x(i, k)).times(Monomial::var(enc.x(j, l)));
                    match (source.get(i, j), target.get(k, l)) {
                        (Some(p), Some(q)) => {
                            let y = Monomial::var(enc.y(p as usize - 1, q as usize - 1));
                            push(
                                BoolPolynomial::from_terms([cells.times(y), cells]),
                                &mut gens,
                            );
                        }
                        (None, Some(_)) | (Some(_), None) => {
                            push(BoolPolynomial::monomial(cells), &mut gens)
                        }
                        (None, None) => {}
                    }
                }
            }
        }
    }
    Ok(BoolIdeal::new(ring, gens))
}

fn check_corners(upper: &PartialLatinRectangle, lower: &PartialLatinRectangle) -> Result<()> {
    let sum = upper.direct_sum(lower)?;
    if !upper.is_self_orthogonal()? || !lower.is_self_orthogonal()? || !sum.is_self_orthogonal()? {
        return Err(Error::Precondition(format!(
            "({upper}) and ({lower}) do not form a self-orthogonal direct sum"
        )));
    }
    Ok(())
}

/// Zeros are the `r x r'` blocks that fit in the upper-right corner of
/// `upper ⊕ lower` keeping it a partial Latin rectangle: the rectangle ideal
/// plus `x_{ijk}` whenever `k` already occurs in row `i` of `upper` or in
/// column `j` of `lower`.
pub fn ideal_corner_b(upper: &PartialLatinRectangle, lower: &PartialLatinRectangle) -> Result<BoolIdeal> {
    check_corners(upper, lower)?;
    let (r, r2, n) = (upper.rows(), lower.rows(), upper.symbol_bound());
    let enc = PlrEncoding::new(r, r2, n)?;
    let ring = enc.ring()?;
    let mut gens = MonomialGenerators::default();
    plr_generators(&enc, &mut gens);
    for i in 0..r {
        for j in 0..r2 {
            for k in 1..=n as u8 {
                let in_row = (0..r).any(|l| upper.get(i, l) == Some(k));
                let in_col = (0..r2).any(|l| lower.get(l, j) == Some(k));
                if in_row || in_col {
                    gens.push_vars(&[enc.var(i, j, k as usize)]);
                }
            }
        }
    }
    Ok(BoolIdeal::new(ring, gens.list))
}

/// Zeros are the `r' x r` lower-left blocks `C` completing `upper ⊕ lower`
/// with upper-right block `block` to a self-orthogonal rectangle. Cell
/// `(i, j)` of `C` is the transpose position of cell `(j, i)` of the block.
pub fn ideal_corner_c(
    upper: &PartialLatinRectangle,
    lower: &PartialLatinRectangle,
    block: &PartialLatinRectangle,
) -> Result<BoolIdeal> {
    check_corners(upper, lower)?;
    let (r, r2, n) = (upper.rows(), lower.rows(), upper.symbol_bound());
    if block.rows() != r || block.cols() != r2 || block.symbol_bound() != n {
        return Err(Error::DimensionMismatch(format!(
            "upper-right block is {}x{} on [{}], expected {r}x{r2} on [{n}]",
            block.rows(),
            block.cols(),
            block.symbol_bound()
        )));
    }
    let enc = PlrEncoding::new(r2, r, n)?;
    let ring = enc.ring()?;
    let mut gens = MonomialGenerators::default();
    plr_generators(&enc, &mut gens);

    let mirrored = |i: usize, j: usize| block.get(j, i);
    let cells: Vec<(usize, usize)> = (0..r2).flat_map(|i| (0..r).map(move |j| (i, j))).collect();
    for &(i, j) in &cells {
        for &(i2, j2) in &cells {
            let (Some(a), Some(b)) = (mirrored(i, j), mirrored(i2, j2)) else {
                continue;
            };
            if (i, j) != (i2, j2) && a == b {
                // equal symbols in the block force distinct symbols here
                for k in 1..=n {
                    gens.push_vars(&[enc.var(i, j, k), enc.var(i2, j2, k)]);
                }
            }
            if a != b {
                // C(i, j) = b and C(i2, j2) = a would repeat the pair (b, a)
                gens.push_vars(&[enc.var(i, j, b as usize), enc.var(i2, j2, a as usize)]);
            }
        }
    }
    for &(i, j) in &cells {
        let a = mirrored(i, j);
        for k in 1..=n as u8 {
            let same_as_mirror = a == Some(k);
            let via = |p: &PartialLatinRectangle| {
                let m = p.rows();
                a.is_some()
                    && (0..m).any(|l| (0..m).any(|t| p.get(l, t) == a && p.get(t, l) == Some(k)))
            };
            let in_col = (0..r).any(|l| upper.get(l, j) == Some(k));
            let in_row = (0..r2).any(|l| lower.get(i, l) == Some(k));
            if same_as_mirror || via(upper) || via(lower) || in_col || in_row {
                gens.push_vars(&[enc.var(i, j, k as usize)]);
            }
        }
    }
    Ok(BoolIdeal::new(ring, gens.list))
}

/// Zeros are `base` itself and its self-orthogonal extensions placing the
/// new symbol `symbol` in one or more empty cells.
///
/// `base` must be self-orthogonal and use exactly the symbols
/// `1..symbol`. The self-orthogonal ideal on `symbol` symbols is evaluated
/// at the known cells, leaving one variable per empty cell of `base`
/// (row-major); satisfied generators vanish and generators subsumed by a
/// shorter one are dropped.
pub fn ideal_extension(base: &PartialLatinRectangle, symbol: usize) -> Result<BoolIdeal> {
    if !base.is_square() {
        return Err(Error::NotSquare {
            rows: base.rows(),
            cols: base.cols(),
        });
    }
    if symbol == 0 || base.symbol_support() != (1u64 << (symbol - 1)) - 1 {
        return Err(Error::Precondition(format!(
            "{base} does not use exactly the symbols 1..{symbol}"
        )));
    }
    let r = base.rows();
    let full = ideal_sor(r, symbol)?;
    let enc = PlrEncoding::new(r, r, symbol)?;

    let free_cells: Vec<(usize, usize)> = (0..r)
        .flat_map(|i| (0..r).map(move |j| (i, j)))
        .filter(|&(i, j)| base.get(i, j).is_none())
        .collect();
    // old variable -> Ok(new variable) or Err(constant value)
    let mut map: Vec<std::result::Result<usize, bool>> = vec![Err(false); enc.num_vars()];
    for i in 0..r {
        for j in 0..r {
            for k in 1..symbol {
                map[enc.var(i, j, k)] = Err(base.get(i, j) == Some(k as u8));
            }
        }
    }
    for (t, &(i, j)) in free_cells.iter().enumerate() {
        map[enc.var(i, j, symbol)] = Ok(t);
    }

    let mut monomials = Vec::new();
    for g in &full.generators {
        let m = g.terms()[0];
        let mut image = Monomial::ONE;
        let mut vanishes = false;
        for v in m.vars() {
            match map[v] {
                Ok(t) => image = image.times(Monomial::var(t)),
                Err(false) => vanishes = true,
                Err(true) => {}
            }
        }
        if vanishes {
            continue;
        }
        if image == Monomial::ONE {
            return Err(Error::Precondition(format!(
                "{base} violates a generator of the self-orthogonal ideal"
            )));
        }
        monomials.push(image);
    }
    monomials.sort_by_key(|m| (m.degree(), m.0));
    monomials.dedup();
    let mut kept: Vec<Monomial> = Vec::new();
    for m in monomials {
        if !kept.iter().any(|k| k.divides(m)) {
            kept.push(m);
        }
    }

    let ring = BoolRing::new(
        free_cells
            .iter()
            .map(|(i, j)| format!("x_{{{}{}{}}}", i + 1, j + 1, symbol))
            .collect(),
    )?;
    Ok(BoolIdeal::new(
        ring,
        kept.into_iter().map(BoolPolynomial::monomial).collect(),
    ))
}

/// The rectangle of a point of [`ideal_extension`]'s variety.
pub fn decode_extension(base: &PartialLatinRectangle, symbol: usize, point: u128) -> Result<PartialLatinRectangle> {
    let r = base.rows();
    let mut cells = base.raw_cells().to_vec();
    let free: Vec<usize> = (0..r * r).filter(|&c| cells[c] == 0).collect();
    for t in crate::hamming::bits(point) {
        cells[free[t]] = symbol as u8;
    }
    PartialLatinRectangle::from_cells(r, r, base.symbol_bound().max(symbol), cells)
}
