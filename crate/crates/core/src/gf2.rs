//! Bit-packed linear algebra over GF(2).
//!
//! Vectors of up to 64 entries live in a single `u64`. Entry `0` is the most
//! significant of the `len` used bits, so the integer value of a vector reads
//! left to right the same way a bitstring does (`01110` is 14).
//!
//! Matrices store one word per row and eliminate with word-wide XORs.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest supported vector length.
pub const MAX_WIDTH: usize = 64;

fn check_width(len: usize) -> Result<()> {
    if (1..=MAX_WIDTH).contains(&len) {
        Ok(())
    } else {
        Err(Error::UnsupportedWidth(len))
    }
}

#[inline]
fn low_mask(len: usize) -> u64 {
    if len == 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

/// A vector over GF(2) with `1 <= len <= 64` entries.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Gf2Vector {
    bits: u64,
    len: usize,
}

impl Gf2Vector {
    pub fn zeros(len: usize) -> Result<Self> {
        check_width(len)?;
        Ok(Self { bits: 0, len })
    }

    /// Builds a vector from its integer value; entry 0 is the top bit.
    pub fn from_bits(bits: u64, len: usize) -> Result<Self> {
        check_width(len)?;
        if bits & !low_mask(len) != 0 {
            return Err(Error::ValueOutOfRange { value: bits, width: len });
        }
        Ok(Self { bits, len })
    }

    pub fn from_bools(entries: &[bool]) -> Result<Self> {
        check_width(entries.len())?;
        let bits = entries
            .iter()
            .fold(0u64, |acc, &e| (acc << 1) | u64::from(e));
        Ok(Self { bits, len: entries.len() })
    }

    /// Unit vector with a single one at `index`.
    pub fn unit(index: usize, len: usize) -> Result<Self> {
        let mut v = Self::zeros(len)?;
        if index >= len {
            return Err(Error::InvalidArgument(format!(
                "index {index} out of range for length {len}"
            )));
        }
        v.set(index, true);
        Ok(v)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Packed integer value.
    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    #[inline]
    fn column_mask(&self, index: usize) -> u64 {
        debug_assert!(index < self.len);
        1u64 << (self.len - 1 - index)
    }

    #[inline]
    pub fn get(&self, index: usize) -> bool {
        assert!(index < self.len, "index {index} out of range");
        self.bits & self.column_mask(index) != 0
    }

    #[inline]
    pub fn set(&mut self, index: usize, value: bool) {
        assert!(index < self.len, "index {index} out of range");
        let m = self.column_mask(index);
        if value {
            self.bits |= m;
        } else {
            self.bits &= !m;
        }
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    /// Inner product mod 2.
    ///
    /// Panics if the lengths differ.
    #[inline]
    pub fn dot(&self, other: &Self) -> bool {
        assert_eq!(self.len, other.len, "dot of vectors with different lengths");
        (self.bits & other.bits).count_ones() & 1 == 1
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn to_bools(&self) -> Vec<bool> {
        self.iter().collect()
    }
}

impl std::ops::BitXor for Gf2Vector {
    type Output = Gf2Vector;

    fn bitxor(self, rhs: Self) -> Self {
        assert_eq!(self.len, rhs.len, "xor of vectors with different lengths");
        Self { bits: self.bits ^ rhs.bits, len: self.len }
    }
}

impl fmt::Display for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in self.iter() {
            f.write_str(if e { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Vector({self})")
    }
}

impl FromStr for Gf2Vector {
    type Err = Error;

    /// Parses a plain `0`/`1` string such as `01110`.
    fn from_str(s: &str) -> Result<Self> {
        let entries = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("invalid bit {other:?} in {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bools(&entries)
    }
}

/// A `t x width` matrix over GF(2), one packed word per row.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    width: usize,
    rows: Vec<u64>,
}

impl Gf2Matrix {
    /// A matrix with no rows.
    pub fn new(width: usize) -> Result<Self> {
        check_width(width)?;
        Ok(Self { width, rows: Vec::new() })
    }

    pub fn zeros(rows: usize, width: usize) -> Result<Self> {
        check_width(width)?;
        Ok(Self { width, rows: vec![0; rows] })
    }

    pub fn from_rows(width: usize, rows: &[Gf2Vector]) -> Result<Self> {
        let mut m = Self::new(width)?;
        for r in rows {
            m.push_row(r)?;
        }
        Ok(m)
    }

    /// Parses rows written as bitstrings, e.g. `["01101", "01010"]`.
    pub fn from_bitstrings<S: AsRef<str>>(width: usize, rows: &[S]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|r| r.as_ref().parse::<Gf2Vector>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(width, &parsed)
    }

    pub fn push_row(&mut self, row: &Gf2Vector) -> Result<()> {
        if row.len() != self.width {
            return Err(Error::LengthMismatch { expected: self.width, found: row.len() });
        }
        self.rows.push(row.bits());
        Ok(())
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, index: usize) -> Gf2Vector {
        Gf2Vector { bits: self.rows[index], len: self.width }
    }

    pub fn rows(&self) -> impl Iterator<Item = Gf2Vector> + '_ {
        self.rows.iter().map(|&bits| Gf2Vector { bits, len: self.width })
    }

    /// Computes `M v` as one bit per row.
    pub fn mul_vec(&self, v: &Gf2Vector) -> Result<Vec<bool>> {
        if v.len() != self.width {
            return Err(Error::LengthMismatch { expected: self.width, found: v.len() });
        }
        Ok(self.rows.iter().map(|&r| (r & v.bits).count_ones() & 1 == 1).collect())
    }

    /// True iff `M v = 0`.
    pub fn annihilates(&self, v: &Gf2Vector) -> bool {
        v.len() == self.width && self.rows.iter().all(|&r| (r & v.bits).count_ones() & 1 == 0)
    }

    /// Reduced row-echelon form plus the pivot column of each nonzero row.
    fn echelon(&self) -> (Vec<u64>, Vec<usize>) {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..self.width {
            if next == rows.len() {
                break;
            }
            let mask = 1u64 << (self.width - 1 - col);
            let Some(found) = (next..rows.len()).find(|&r| rows[r] & mask != 0) else {
                continue;
            };
            rows.swap(next, found);
            let pivot_row = rows[next];
            for (r, row) in rows.iter_mut().enumerate() {
                if r != next && *row & mask != 0 {
                    *row ^= pivot_row;
                }
            }
            pivots.push(col);
            next += 1;
        }
        (rows, pivots)
    }

    /// Reduced row-echelon form. Zero rows end up at the bottom and the row
    /// count is unchanged.
    pub fn row_reduce(&self) -> Gf2Matrix {
        let (rows, _) = self.echelon();
        Gf2Matrix { width: self.width, rows }
    }

    pub fn rank(&self) -> usize {
        self.echelon().1.len()
    }

    /// Basis of `{x : M x = 0}`, one vector per free column.
    pub fn null_space(&self) -> Vec<Gf2Vector> {
        let (rows, pivots) = self.echelon();
        let mut is_pivot = vec![false; self.width];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.width)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let free_mask = 1u64 << (self.width - 1 - free);
                let mut bits = free_mask;
                for (r, &p) in pivots.iter().enumerate() {
                    if rows[r] & free_mask != 0 {
                        bits |= 1u64 << (self.width - 1 - p);
                    }
                }
                Gf2Vector { bits, len: self.width }
            })
            .collect()
    }
}

impl fmt::Display for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{row}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

/// Free-function form of [`Gf2Matrix::row_reduce`].
pub fn row_reduce(m: &Gf2Matrix) -> Gf2Matrix {
    m.row_reduce()
}

pub fn rank(m: &Gf2Matrix) -> usize {
    m.rank()
}

pub fn null_space(m: &Gf2Matrix) -> Vec<Gf2Vector> {
    m.null_space()
}
