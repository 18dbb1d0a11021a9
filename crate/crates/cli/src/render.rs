//! Text and PPM views of a diagram dump.
//!
//! `λ` is drawn as `.` in text and white in images. The other symbols take
//! colors from [`PALETTE`] in order of first appearance in the dump; the map
//! is written next to the images as `colors.json`.

use std::collections::BTreeMap;

use ca_signals_core::Time;

use crate::formats::DiagramFile;

pub const LAMBDA_COLOR: [u8; 3] = [255, 255, 255];

pub const PALETTE: [[u8; 3]; 12] = [
    [0, 0, 0],
    [220, 50, 47],
    [38, 139, 210],
    [133, 153, 0],
    [211, 54, 130],
    [181, 137, 0],
    [42, 161, 152],
    [108, 113, 196],
    [203, 75, 22],
    [88, 110, 117],
    [147, 161, 161],
    [7, 54, 66],
];

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum RenderError {
    #[error("time {t} is beyond the diagram horizon {horizon}")]
    UnknownTime { t: Time, horizon: Time },
    #[error("{0}-dimensional diagrams cannot be drawn as a grid")]
    Dimension(usize),
}

struct Glyphs {
    width: usize,
}

impl Glyphs {
    fn new(d: &DiagramFile) -> Glyphs {
        let width = d.symbols().iter().map(|s| s.chars().count()).max().unwrap_or(1).max(1);
        Glyphs { width }
    }

    fn push(&self, row: &mut String, symbol: Option<&str>) {
        if self.width > 1 && !row.is_empty() {
            row.push(' ');
        }
        let s = symbol.unwrap_or(".");
        row.push_str(s);
        for _ in s.chars().count()..self.width {
            row.push(' ');
        }
    }
}

fn grid_dim(d: &DiagramFile) -> Result<usize, RenderError> {
    match d.dim().unwrap_or(2) {
        n @ (1 | 2) => Ok(n),
        n => Err(RenderError::Dimension(n)),
    }
}

/// The slice at time `t` over `[-t, t]^k`: one row for `k = 1`, otherwise
/// rows from `y = t` down to `y = -t` with `x` increasing to the right.
pub fn render_slice(d: &DiagramFile, t: Time) -> Result<String, RenderError> {
    let slice = d.slices.get(t as usize).ok_or(RenderError::UnknownTime { t, horizon: d.horizon() })?;
    let dim = grid_dim(d)?;
    let cells: BTreeMap<&[i32], &str> = slice.cells.iter().map(|c| (c.u.as_slice(), c.s.as_str())).collect();
    let g = Glyphs::new(d);
    let r = t as i32;
    let mut out = String::new();
    let ys: Vec<Option<i32>> = if dim == 1 { vec![None] } else { (-r..=r).rev().map(Some).collect() };
    for y in ys {
        let mut row = String::new();
        for x in -r..=r {
            let key: Vec<i32> = std::iter::once(x).chain(y).collect();
            g.push(&mut row, cells.get(key.as_slice()).copied());
        }
        out.push_str(row.trim_end());
        out.push('\n');
    }
    Ok(out)
}

/// Rows `l = 0, 1, …` of `W(k, l, i) = value(k-i+l, k-i-l, k+i+l)`, each
/// running over `i = 0 ..= T - k - l`.
pub fn render_wplane(d: &DiagramFile, k: Time) -> Result<String, RenderError> {
    let horizon = d.horizon();
    if k > horizon {
        return Err(RenderError::UnknownTime { t: k, horizon });
    }
    if grid_dim(d)? != 2 {
        return Err(RenderError::Dimension(1));
    }
    let lookup = d.lookup();
    let g = Glyphs::new(d);
    let span = (horizon - k) as i64;
    let k = k as i64;
    let mut out = String::new();
    for l in 0..=span {
        let mut row = String::new();
        for i in 0..=span - l {
            let key = ((k + i + l) as Time, vec![(k - i + l) as i32, (k - i - l) as i32]);
            g.push(&mut row, lookup.get(&key).copied());
        }
        out.push_str(row.trim_end());
        out.push('\n');
    }
    Ok(out)
}

pub fn color_map(d: &DiagramFile) -> BTreeMap<String, [u8; 3]> {
    let mut map: BTreeMap<String, [u8; 3]> =
        d.symbols().into_iter().enumerate().map(|(n, s)| (s.to_string(), PALETTE[n % PALETTE.len()])).collect();
    map.insert("λ".into(), LAMBDA_COLOR);
    map
}

/// One binary P6 image per slice, all `(2T+1)` pixels wide so frames line
/// up; `y` grows upward. 1-D diagrams give one-pixel-high frames.
pub fn render_ppm(d: &DiagramFile) -> Result<Vec<Vec<u8>>, RenderError> {
    let dim = grid_dim(d)?;
    let colors = color_map(d);
    let r = d.horizon() as i32;
    let side = (2 * r + 1) as usize;
    let height = if dim == 1 { 1 } else { side };
    let mut frames = Vec::with_capacity(d.slices.len());
    for slice in &d.slices {
        let mut img = format!("P6\n{side} {height}\n255\n").into_bytes();
        let header = img.len();
        img.resize(header + side * height * 3, 255);
        for c in &slice.cells {
            let x = (c.u[0] + r) as usize;
            let row = if dim == 1 { 0 } else { (r - c.u[1]) as usize };
            let at = header + (row * side + x) * 3;
            img[at..at + 3].copy_from_slice(&colors[&c.s]);
        }
        frames.push(img);
    }
    Ok(frames)
}
