use alloc::string::String;
use alloc::vec::Vec;

use super::AnalysisError;
use crate::automaton::gcd;
use crate::engine::SiteLookup;

/// The digit `d < xy` with `d ≡ p (mod x)` and `d ≡ k (mod y)`, where
/// `π_x ≡ π_0` and `κ_y ≡ κ_0`.
pub fn crt_digit(x: u32, y: u32, p: u32, k: u32) -> Result<u64, AnalysisError> {
    if x == 0 || y == 0 || gcd(x as u64, y as u64) != 1 {
        return Err(AnalysisError::NotCoprime { x, y });
    }
    if p > x || k > y {
        return Err(AnalysisError::IndexOutOfRange { p, k });
    }
    let (a, b) = ((p % x) as u64, (k % y) as u64);
    let (x, y) = (x as u64, y as u64);
    Ok((0..y).map(|j| a + x * j).find(|d| d % y == b).expect("coprime moduli"))
}

/// `(W(k,0,i))_i` up to the first `λ`, as digits `0`/`1`, low digit first.
pub fn binary_readout<D: SiteLookup + ?Sized>(d: &D, k: u64) -> Result<Vec<u8>, AnalysisError> {
    let ca = d.ca();
    let mut out = Vec::new();
    for i in 0.. {
        let s = d.w_value(k as i64, 0, i)?;
        if s == ca.quiescent() {
            break;
        }
        match ca.symbol(s) {
            "0" => out.push(0),
            "1" => out.push(1),
            other => return Err(AnalysisError::UnexpectedState(String::from(other))),
        }
    }
    Ok(out)
}

fn plane_index(symbol: &str, prefix: &str) -> Option<u32> {
    symbol.strip_prefix(prefix)?.parse().ok()
}

/// Base-`xy` digits of the counter row `k`: digit `i` combines the `π` index
/// at `W(k,0,i)` with the `κ` index at `W(k,1,i)`. A quiescent cell on one
/// plane counts as index 0; reading stops when both planes are quiescent.
pub fn base_xy_readout<D: SiteLookup + ?Sized>(
    d: &D,
    k: u64,
    x: u32,
    y: u32,
) -> Result<Vec<u64>, AnalysisError> {
    let ca = d.ca();
    let lambda = ca.quiescent();
    let mut out = Vec::new();
    for i in 0.. {
        let a = d.w_value(k as i64, 0, i)?;
        let b = d.w_value(k as i64, 1, i)?;
        if a == lambda && b == lambda {
            break;
        }
        let read = |s, l: u8, prefix: &str| -> Result<u32, AnalysisError> {
            if s == lambda {
                return Ok(0);
            }
            plane_index(ca.symbol(s), prefix).ok_or_else(|| AnalysisError::PlaneViolation {
                l,
                i: i as u64,
                symbol: String::from(ca.symbol(s)),
            })
        };
        let p = read(a, 0, "π_")?;
        let q = read(b, 1, "κ_")?;
        out.push(crt_digit(x, y, p, q)?);
    }
    Ok(out)
}
