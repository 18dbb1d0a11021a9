//! Integer lattice geometry: cells of `Z^k`, sites, radius-one
//! neighborhoods, the light cone of the origin and trellis parity.

use alloc::vec::Vec;
use core::fmt;
use core::ops::Index;

use thiserror::Error;

/// Largest supported lattice dimension.
pub const MAX_DIM: usize = 4;

/// Discrete time step of a space-time diagram.
pub type Time = u32;

/// Largest horizon the engine accepts. Every stored coordinate is bounded by
/// the horizon in absolute value, so coordinates stay well inside `i32`.
pub const MAX_HORIZON: Time = (i32::MAX / 4) as Time;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("dimension {0} is outside 1..={MAX_DIM}")]
    BadDimension(usize),
    #[error("coordinate dimensions differ ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("coordinate arithmetic overflowed")]
    Overflow,
}

/// A cell index `u ∈ Z^k` with `1 <= k <= MAX_DIM`.
///
/// Ordering is lexicographic on the components, which is the canonical order
/// used for offsets, slices and every dump.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coord {
    dim: u8,
    c: [i32; MAX_DIM],
}

impl Coord {
    pub fn new(components: &[i32]) -> Result<Self, LatticeError> {
        let dim = components.len();
        if dim == 0 || dim > MAX_DIM {
            return Err(LatticeError::BadDimension(dim));
        }
        let mut c = [0; MAX_DIM];
        c[..dim].copy_from_slice(components);
        Ok(Coord { dim: dim as u8, c })
    }

    /// Same as [`Coord::new`] for call sites with a statically valid length.
    ///
    /// Panics if the length is outside `1..=MAX_DIM`.
    pub fn from_slice(components: &[i32]) -> Self {
        Self::new(components).expect("coordinate dimension out of range")
    }

    pub fn zero(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "coordinate dimension out of range");
        Coord { dim: dim as u8, c: [0; MAX_DIM] }
    }

    /// `value · 1`, the constant vector.
    pub fn splat(dim: usize, value: i32) -> Self {
        let mut c = Self::zero(dim);
        for v in c.c[..dim].iter_mut() {
            *v = value;
        }
        c
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    #[inline]
    pub fn as_slice(&self) -> &[i32] {
        &self.c[..self.dim as usize]
    }

    pub fn checked_add(&self, other: &Coord) -> Result<Coord, LatticeError> {
        self.zip_with(other, i32::checked_add)
    }

    pub fn checked_sub(&self, other: &Coord) -> Result<Coord, LatticeError> {
        self.zip_with(other, i32::checked_sub)
    }

    pub fn checked_neg(&self) -> Result<Coord, LatticeError> {
        let mut out = *self;
        for v in out.c[..self.dim()].iter_mut() {
            *v = v.checked_neg().ok_or(LatticeError::Overflow)?;
        }
        Ok(out)
    }

    /// `t · 1 − self`.
    pub fn diagonal_complement(&self, t: Time) -> Result<Coord, LatticeError> {
        let t = i32::try_from(t).map_err(|_| LatticeError::Overflow)?;
        Coord::splat(self.dim(), t).checked_sub(self)
    }

    pub fn max_component(&self) -> i32 {
        self.as_slice().iter().copied().max().unwrap_or(0)
    }

    pub fn min_component(&self) -> i32 {
        self.as_slice().iter().copied().min().unwrap_or(0)
    }

    /// True iff every component is non-negative (`u ∈ N^k`).
    pub fn is_natural(&self) -> bool {
        self.as_slice().iter().all(|&v| v >= 0)
    }

    pub fn component_sum(&self) -> i64 {
        self.as_slice().iter().map(|&v| v as i64).sum()
    }

    fn zip_with(
        &self,
        other: &Coord,
        op: impl Fn(i32, i32) -> Option<i32>,
    ) -> Result<Coord, LatticeError> {
        if self.dim != other.dim {
            return Err(LatticeError::DimensionMismatch(self.dim(), other.dim()));
        }
        let mut out = *self;
        for (a, b) in out.c[..self.dim()].iter_mut().zip(other.as_slice()) {
            *a = op(*a, *b).ok_or(LatticeError::Overflow)?;
        }
        Ok(out)
    }
}

impl Index<usize> for Coord {
    type Output = i32;
    fn index(&self, i: usize) -> &i32 {
        &self.as_slice()[i]
    }
}

impl fmt::Debug for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `(-1,1)` style, the coordinate syntax used by rule files, the CLI and reports.
impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (n, v) in self.as_slice().iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

/// A cell at a time step, `⟨u, t⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Site {
    pub time: Time,
    pub cell: Coord,
}

impl Site {
    pub fn new(cell: Coord, time: Time) -> Self {
        Site { time, cell }
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {}>", self.cell, self.time)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NeighborhoodKind {
    /// `Σ|x_i| <= 1`
    VonNeumann,
    /// `|x_i| <= 1`
    Moore,
    /// `|x_i| = 1`
    Trellis,
}

impl NeighborhoodKind {
    pub fn name(self) -> &'static str {
        match self {
            NeighborhoodKind::VonNeumann => "vonneumann",
            NeighborhoodKind::Moore => "moore",
            NeighborhoodKind::Trellis => "trellis",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "vonneumann" | "von-neumann" | "von_neumann" => Some(NeighborhoodKind::VonNeumann),
            "moore" => Some(NeighborhoodKind::Moore),
            "trellis" => Some(NeighborhoodKind::Trellis),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Neighborhood {
    pub kind: NeighborhoodKind,
    dim: u8,
}

impl Neighborhood {
    pub fn new(kind: NeighborhoodKind, dim: usize) -> Result<Self, LatticeError> {
        if dim == 0 || dim > MAX_DIM {
            return Err(LatticeError::BadDimension(dim));
        }
        Ok(Neighborhood { kind, dim: dim as u8 })
    }

    pub fn trellis(dim: usize) -> Self {
        Self::new(NeighborhoodKind::Trellis, dim).expect("dimension out of range")
    }

    pub fn moore(dim: usize) -> Self {
        Self::new(NeighborhoodKind::Moore, dim).expect("dimension out of range")
    }

    pub fn von_neumann(dim: usize) -> Self {
        Self::new(NeighborhoodKind::VonNeumann, dim).expect("dimension out of range")
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    /// Whether `x` satisfies the defining predicate.
    pub fn contains(&self, x: &Coord) -> bool {
        if x.dim() != self.dim() {
            return false;
        }
        let c = x.as_slice();
        match self.kind {
            NeighborhoodKind::Moore => c.iter().all(|v| v.abs() <= 1),
            NeighborhoodKind::Trellis => c.iter().all(|v| v.abs() == 1),
            NeighborhoodKind::VonNeumann => c.iter().map(|v| v.unsigned_abs()).sum::<u32>() <= 1,
        }
    }

    /// All offsets of the neighborhood in lexicographic order:
    /// `3^k` for Moore, `2k+1` for von Neumann, `2^k` for trellis.
    pub fn offsets(&self) -> Vec<Coord> {
        let k = self.dim();
        let mut out = Vec::new();
        let mut cur = [-1i32; MAX_DIM];
        // Odometer over {-1,0,1}^k, most significant component first.
        loop {
            let c = Coord::from_slice(&cur[..k]);
            if self.contains(&c) {
                out.push(c);
            }
            let mut pos = k;
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                if cur[pos] < 1 {
                    cur[pos] += 1;
                    break;
                }
                cur[pos] = -1;
            }
        }
    }

    pub fn size(&self) -> usize {
        let k = self.dim() as u32;
        match self.kind {
            NeighborhoodKind::Moore => 3usize.pow(k),
            NeighborhoodKind::VonNeumann => 2 * k as usize + 1,
            NeighborhoodKind::Trellis => 2usize.pow(k),
        }
    }
}

impl fmt::Display for Neighborhood {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.kind.name(), self.dim)
    }
}

/// True iff every coordinate of the cell satisfies `|c_a| <= t`.
pub fn in_light_cone(site: &Site) -> bool {
    let t = site.time as i64;
    site.cell.as_slice().iter().all(|&c| (c as i64).abs() <= t)
}

/// Trellis sites exist only where every `u_a + t` is even; the other
/// neighborhoods impose no parity constraint.
pub fn parity_valid(site: &Site, n: &Neighborhood) -> bool {
    match n.kind {
        NeighborhoodKind::Trellis => {
            let t = site.time as i64;
            site.cell.as_slice().iter().all(|&c| (c as i64 + t) % 2 == 0)
        }
        NeighborhoodKind::Moore | NeighborhoodKind::VonNeumann => true,
    }
}
