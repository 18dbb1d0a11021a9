//! JSON interchange: diagram dumps, signals and follower files.

use std::collections::BTreeMap;
use std::io::{self, Write};

use ca_signals_core::engine::{EngineError, Stepper};
use ca_signals_core::signals::{FollowerEntry, SignalError};
use ca_signals_core::{Coord, Follower, ImpulseCA, RunOptions, Signal, Time};
use serde::{Deserialize, Serialize};

/// One slice of a diagram dump; `λ` cells are omitted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceRecord {
    pub t: Time,
    pub cells: Vec<CellRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellRecord {
    pub u: Vec<i32>,
    pub s: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum DumpEntry {
    Slice(SliceRecord),
    Truncated { truncated: bool, last_completed: Time },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DumpOutcome {
    /// Last slice written.
    pub last_completed: Time,
    pub truncated: bool,
}

fn write_slice(w: &mut impl Write, ca: &ImpulseCA, t: Time, stepper: &Stepper) -> io::Result<()> {
    write!(w, "{{\"t\":{t},\"cells\":[")?;
    for (n, (c, s)) in stepper.slice().iter().enumerate() {
        if n > 0 {
            w.write_all(b",")?;
        }
        let u: Vec<String> = c.as_slice().iter().map(i32::to_string).collect();
        write!(w, "{{\"u\":[{}],\"s\":{}}}", u.join(","), serde_json::to_string(ca.symbol(s))?)?;
    }
    w.write_all(b"]}")
}

/// Streams the diagram to `w` one slice per line. When the cumulative site
/// count would pass `opts.budget` the dump ends with a
/// `{"truncated":true,"last_completed":N}` entry instead.
pub fn dump_diagram(ca: &ImpulseCA, horizon: Time, opts: &RunOptions, w: &mut impl Write) -> io::Result<DumpOutcome> {
    let mut stepper = Stepper::new(ca, *opts).map_err(io::Error::other)?;
    let mut stored = stepper.slice().len();
    w.write_all(b"[\n")?;
    write_slice(w, ca, 0, &stepper)?;
    let mut outcome = DumpOutcome { last_completed: 0, truncated: false };
    while stepper.time() < horizon {
        match stepper.step() {
            Ok(()) => {}
            Err(EngineError::OverflowHorizon { .. }) => {
                outcome.truncated = true;
                break;
            }
            Err(e) => return Err(io::Error::other(e)),
        }
        stored += stepper.slice().len();
        if stored > opts.budget {
            outcome.truncated = true;
            break;
        }
        w.write_all(b",\n")?;
        write_slice(w, ca, stepper.time(), &stepper)?;
        outcome.last_completed = stepper.time();
    }
    if outcome.truncated {
        write!(w, ",\n{{\"truncated\":true,\"last_completed\":{}}}", outcome.last_completed)?;
    }
    w.write_all(b"\n]\n")?;
    Ok(outcome)
}

/// A parsed dump: slices in time order plus the truncation marker if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramFile {
    pub slices: Vec<SliceRecord>,
    pub truncated_at: Option<Time>,
}

impl DiagramFile {
    pub fn parse(text: &str) -> Result<DiagramFile, String> {
        let entries: Vec<DumpEntry> = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let mut out = DiagramFile { slices: Vec::new(), truncated_at: None };
        for e in entries {
            match e {
                DumpEntry::Slice(s) => {
                    if s.t as usize != out.slices.len() {
                        return Err(format!("slice {} out of order", s.t));
                    }
                    out.slices.push(s);
                }
                DumpEntry::Truncated { last_completed, .. } => out.truncated_at = Some(last_completed),
            }
        }
        if out.slices.is_empty() {
            return Err("empty diagram".into());
        }
        Ok(out)
    }

    pub fn horizon(&self) -> Time {
        self.slices.len() as Time - 1
    }

    pub fn dim(&self) -> Option<usize> {
        self.slices.iter().flat_map(|s| s.cells.first()).map(|c| c.u.len()).next()
    }

    /// Non-`λ` symbols by site.
    pub fn lookup(&self) -> BTreeMap<(Time, Vec<i32>), &str> {
        self.slices
            .iter()
            .flat_map(|s| s.cells.iter().map(move |c| ((s.t, c.u.clone()), c.s.as_str())))
            .collect()
    }

    /// Distinct symbols in order of first appearance.
    pub fn symbols(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for c in self.slices.iter().flat_map(|s| &s.cells) {
            if !out.contains(&c.s.as_str()) {
                out.push(&c.s);
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SiteRecord {
    pub t: Time,
    pub u: Vec<i32>,
}

pub fn signal_to_json(s: &Signal) -> String {
    let records: Vec<SiteRecord> =
        s.sites().map(|x| SiteRecord { t: x.time, u: x.cell.as_slice().to_vec() }).collect();
    let mut out = serde_json::to_string(&records).expect("plain records serialize");
    out.push('\n');
    out
}

/// Reads a signal file; times must run `0, 1, 2, …`. Moves are not checked
/// against a neighborhood.
pub fn signal_from_json(text: &str) -> Result<Signal, String> {
    let records: Vec<SiteRecord> = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let mut cells = Vec::with_capacity(records.len());
    for (n, r) in records.into_iter().enumerate() {
        if r.t as usize != n {
            return Err(format!("expected t={n}, found t={}", r.t));
        }
        cells.push(Coord::new(&r.u).map_err(|e| e.to_string())?);
    }
    if cells.is_empty() {
        return Err("empty signal".into());
    }
    Ok(Signal::unchecked(cells))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaRecord {
    pub q: String,
    pub s: String,
    pub q2: String,
    #[serde(rename = "move")]
    pub offset: Vec<i32>,
}

/// `{"states":[…], "initial":"a1", "delta":[{"q","s","q2","move"}], "default":[…]}`.
/// Without `default` every `(q, s)` pair must be listed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FollowerFile {
    pub states: Vec<String>,
    pub initial: String,
    pub delta: Vec<DeltaRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default: Option<Vec<i32>>,
}

#[derive(Debug, thiserror::Error)]
pub enum FollowerFileError {
    #[error("follower JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown follower state `{0}`")]
    UnknownState(String),
    #[error("bad move {0:?}")]
    BadMove(Vec<i32>),
    #[error(transparent)]
    Signal(#[from] SignalError),
}

impl FollowerFile {
    pub fn parse(text: &str) -> Result<FollowerFile, FollowerFileError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn build(&self, ca: &ImpulseCA) -> Result<Follower, FollowerFileError> {
        let index = |name: &str| {
            self.states.iter().position(|s| s == name).ok_or_else(|| FollowerFileError::UnknownState(name.into()))
        };
        let coord = |v: &[i32]| Coord::new(v).map_err(|_| FollowerFileError::BadMove(v.to_vec()));
        let entries = self
            .delta
            .iter()
            .map(|d| {
                Ok(FollowerEntry {
                    q: index(&d.q)?,
                    s: ca.state(&d.s).map_err(SignalError::from)?,
                    q2: index(&d.q2)?,
                    offset: coord(&d.offset)?,
                })
            })
            .collect::<Result<Vec<_>, FollowerFileError>>()?;
        let default = self.default.as_deref().map(coord).transpose()?;
        Ok(Follower::new(self.states.clone(), index(&self.initial)?, ca.num_states(), entries, default)?)
    }

    /// The listed entries of `f`; defaulted pairs are written out explicitly.
    pub fn from_follower(ca: &ImpulseCA, f: &Follower) -> FollowerFile {
        let delta = f
            .entries()
            .map(|(e, _)| DeltaRecord {
                q: f.name(e.q).into(),
                s: ca.symbol(e.s).into(),
                q2: f.name(e.q2).into(),
                offset: e.offset.as_slice().to_vec(),
            })
            .collect();
        FollowerFile { states: f.names().to_vec(), initial: f.name(f.initial()).into(), delta, default: None }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("plain records serialize");
        out.push('\n');
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ca_signals_core::automaton::{builtin_log2, builtin_xy};
    use ca_signals_core::signals::follower_for_xy;

    fn dump(ca: &ImpulseCA, horizon: Time, opts: &RunOptions) -> (String, DumpOutcome) {
        let mut buf = Vec::new();
        let o = dump_diagram(ca, horizon, opts, &mut buf).unwrap();
        (String::from_utf8(buf).unwrap(), o)
    }

    #[test]
    fn log2_dump_shape() {
        let (text, o) = dump(&builtin_log2(), 8, &RunOptions::default());
        assert_eq!(o, DumpOutcome { last_completed: 8, truncated: false });
        let d = DiagramFile::parse(&text).unwrap();
        assert_eq!(d.slices.len(), 9);
        assert_eq!(d.slices[0].cells, [CellRecord { u: vec![0, 0], s: "1".into() }]);
        assert!(text.starts_with("[\n{\"t\":0,\"cells\":[{\"u\":[0,0],\"s\":\"1\"}]},\n{\"t\":1,"));
        for s in &d.slices {
            assert!(s.cells.windows(2).all(|w| w[0].u < w[1].u));
            assert!(s.cells.iter().all(|c| c.s != "λ"));
        }
        assert_eq!(d.truncated_at, None);
    }

    #[test]
    fn dump_matches_the_engine() {
        let ca = builtin_xy(2, 3).unwrap();
        let (text, _) = dump(&ca, 30, &RunOptions::default());
        let file = DiagramFile::parse(&text).unwrap();
        let d = ca_signals_core::engine::run(&ca, 30).unwrap();
        for (rec, slice) in file.slices.iter().zip(d.slices()) {
            let cells: Vec<CellRecord> = slice
                .iter()
                .map(|(c, s)| CellRecord { u: c.as_slice().to_vec(), s: ca.symbol(s).into() })
                .collect();
            assert_eq!(rec.cells, cells);
        }
    }

    #[test]
    fn truncated_dump_keeps_complete_slices() {
        let (text, o) = dump(&builtin_log2(), 100, &RunOptions::with_budget(40));
        assert!(o.truncated);
        let d = DiagramFile::parse(&text).unwrap();
        assert_eq!(d.truncated_at, Some(o.last_completed));
        assert_eq!(d.horizon(), o.last_completed);
        let stored: usize = d.slices.iter().map(|s| s.cells.len()).sum();
        assert!(stored <= 40);
        assert!(text.trim_end().ends_with(&format!("{{\"truncated\":true,\"last_completed\":{}}}\n]", o.last_completed)));
    }

    #[test]
    fn signals_round_trip() {
        let cells = vec![Coord::from_slice(&[0, 0]), Coord::from_slice(&[1, 1]), Coord::from_slice(&[0, 2])];
        let s = Signal::unchecked(cells);
        let text = signal_to_json(&s);
        assert_eq!(text, "[{\"t\":0,\"u\":[0,0]},{\"t\":1,\"u\":[1,1]},{\"t\":2,\"u\":[0,2]}]\n");
        assert_eq!(signal_from_json(&text).unwrap(), s);
        assert!(signal_from_json("[{\"t\":1,\"u\":[0,0]}]").is_err());
        assert!(signal_from_json("[]").is_err());
    }

    #[test]
    fn followers_round_trip() {
        let ca = builtin_xy(2, 3).unwrap();
        let f = follower_for_xy(&ca, 2, 3).unwrap();
        let file = FollowerFile::from_follower(&ca, &f);
        let back = FollowerFile::parse(&file.to_json()).unwrap();
        assert_eq!(back, file);
        let g = back.build(&ca).unwrap();
        for q in 0..f.num_states() {
            for s in ca.alphabet().ids() {
                assert_eq!(g.delta(q, s), f.delta(q, s));
            }
        }
    }

    #[test]
    fn follower_file_errors() {
        let ca = builtin_log2();
        let partial = r#"{"states":["a"],"initial":"a","delta":[{"q":"a","s":"1","q2":"a","move":[-1,-1]}]}"#;
        let f = FollowerFile::parse(partial).unwrap();
        assert!(matches!(f.build(&ca), Err(FollowerFileError::Signal(SignalError::FollowerNotTotal { .. }))));
        let with_default = partial.replace("]}]}", "]}],\"default\":[1,1]}");
        let g = FollowerFile::parse(&with_default).unwrap().build(&ca).unwrap();
        assert_eq!(g.delta(0, ca.state("0").unwrap()).1, Coord::from_slice(&[1, 1]));
        let bad = partial.replace("\"initial\":\"a\"", "\"initial\":\"b\"");
        assert!(matches!(FollowerFile::parse(&bad).unwrap().build(&ca), Err(FollowerFileError::UnknownState(_))));
    }
}
