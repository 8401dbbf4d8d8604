//! Line-oriented text format for hypothesis families and point lists.
//!
//! ```text
//! family explicit
//! d 3
//! size_bound 0.6931471805599453
//! class 0.5 2
//! table:81
//! hash:37,4,9,5
//! class 0.5 1
//! table:10
//! ```
//!
//! Point and boosted families store their sampler parameters instead of a
//! class list; boosted families end with an `inner` line followed by the
//! inner family. Blank lines and lines starting with `#` are ignored.

use crate::error::{Error, Result};
use crate::model::{DomainPoint, Hypothesis, TruthTable};
use crate::point::{PointParams, ThresholdHash};
use crate::representation::{
    boost_alpha_rounds, boost_beta_draws, FamilyKind, HypothesisClass, HypothesisFamily,
};
use std::fmt::Write as _;

/// Hypothesis as `hash:p,a,b,tau` or `table:<hex>`.
pub fn write_hypothesis(h: &Hypothesis) -> Result<String> {
    if let Some(t) = h.as_threshold_hash() {
        return Ok(format!("hash:{},{},{},{}", t.p, t.a, t.b, t.tau));
    }
    let table = h
        .truth_table()
        .map_err(|_| Error::NotSerializable("hypothesis too wide for a truth table"))?;
    Ok(format!("table:{}", table.to_hex()))
}

pub fn parse_hypothesis(bits: u32, text: &str) -> Result<Hypothesis> {
    let bad = |msg: String| Error::Parse { line: 0, msg };
    if let Some(hex) = text.strip_prefix("table:") {
        return Ok(Hypothesis::table(TruthTable::from_hex(bits, hex)?));
    }
    if let Some(args) = text.strip_prefix("hash:") {
        let v: Vec<u64> = args
            .split(',')
            .map(|t| t.trim().parse().map_err(|e| bad(format!("`{t}`: {e}"))))
            .collect::<Result<_>>()?;
        let [p, a, b, tau] = v[..] else {
            return Err(bad(format!("hash needs 4 fields, found {}", v.len())));
        };
        return Ok(Hypothesis::threshold_hash(bits, ThresholdHash::new(p, a, b, tau)?));
    }
    Err(bad(format!("unknown hypothesis `{text}`")))
}

pub fn write_family(family: &HypothesisFamily) -> Result<String> {
    let mut out = String::new();
    write_into(family, &mut out)?;
    Ok(out)
}

fn write_into(family: &HypothesisFamily, out: &mut String) -> Result<()> {
    let kind = family.kind();
    let name = match kind {
        FamilyKind::Sampler { .. } => return Err(Error::NotSerializable("opaque sampler family")),
        other => other.name(),
    };
    writeln!(out, "family {name}").unwrap();
    writeln!(out, "d {}", family.bits()).unwrap();
    writeln!(out, "size_bound {}", family.size_bound()).unwrap();
    match kind {
        FamilyKind::Explicit => {
            let support = family.explicit_support().ok_or(Error::NoExplicitSupport)?;
            for (class, w) in support {
                let members: Vec<String> =
                    class.iter().map(|h| write_hypothesis(&h)).collect::<Result<_>>()?;
                writeln!(out, "class {w} {}", members.len()).unwrap();
                for m in members {
                    writeln!(out, "{m}").unwrap();
                }
            }
        }
        FamilyKind::Point(p) => {
            writeln!(out, "alpha {}", p.alpha).unwrap();
            writeln!(out, "beta {}", p.beta).unwrap();
        }
        FamilyKind::BoostBeta { inner, draws } => {
            writeln!(out, "draws {draws}").unwrap();
            writeln!(out, "inner").unwrap();
            write_into(inner, out)?;
        }
        FamilyKind::BoostAlpha { inner, rounds } => {
            writeln!(out, "rounds {rounds}").unwrap();
            writeln!(out, "inner").unwrap();
            write_into(inner, out)?;
        }
        FamilyKind::Sampler { .. } => unreachable!(),
    }
    Ok(())
}

struct Lines<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .collect();
        Self { lines, pos: 0 }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        let line = self
            .lines
            .get(self.pos.saturating_sub(1))
            .map_or(0, |(n, _)| *n);
        Error::Parse { line, msg: msg.into() }
    }

    fn next(&mut self) -> Result<&'a str> {
        let l = self.lines.get(self.pos).map(|(_, l)| *l);
        self.pos += 1;
        l.ok_or_else(|| self.err("unexpected end of input"))
    }

    fn peek(&self) -> Option<&'a str> {
        self.lines.get(self.pos).map(|(_, l)| *l)
    }

    fn field<T: std::str::FromStr>(&mut self, key: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        let line = self.next()?;
        let value = line
            .strip_prefix(key)
            .filter(|r| r.starts_with(' '))
            .ok_or_else(|| self.err(format!("expected `{key}`, found `{line}`")))?;
        value
            .trim()
            .parse()
            .map_err(|e| self.err(format!("bad {key}: {e}")))
    }

    fn locate(&self, e: Error) -> Error {
        match e {
            Error::Parse { line: 0, msg } => self.err(msg),
            other => other,
        }
    }
}

pub fn parse_family(text: &str) -> Result<HypothesisFamily> {
    let mut lines = Lines::new(text);
    let family = parse_block(&mut lines)?;
    if let Some(extra) = lines.peek() {
        lines.pos += 1;
        return Err(lines.err(format!("trailing content `{extra}`")));
    }
    Ok(family)
}

fn parse_block(lines: &mut Lines<'_>) -> Result<HypothesisFamily> {
    let kind: String = lines.field("family")?;
    if !["explicit", "point", "boost-beta", "boost-alpha"].contains(&kind.as_str()) {
        return Err(lines.err(format!("unknown family kind `{kind}`")));
    }
    let bits: u32 = lines.field("d")?;
    let size_bound: f64 = lines.field("size_bound")?;
    let family = match kind.as_str() {
        "explicit" => {
            let mut support = Vec::new();
            while lines.peek().is_some_and(|l| l.starts_with("class ")) {
                let head = lines.next()?;
                let parts: Vec<&str> = head.split_whitespace().collect();
                let (w, n) = match parts[..] {
                    [_, w, n] => (
                        w.parse::<f64>().map_err(|e| lines.err(e.to_string()))?,
                        n.parse::<usize>().map_err(|e| lines.err(e.to_string()))?,
                    ),
                    _ => return Err(lines.err(format!("bad class header `{head}`"))),
                };
                let members = (0..n)
                    .map(|_| {
                        let l = lines.next()?;
                        parse_hypothesis(bits, l).map_err(|e| lines.locate(e))
                    })
                    .collect::<Result<Vec<_>>>()?;
                support.push((HypothesisClass::new(members).map_err(|e| lines.locate(e))?, w));
            }
            HypothesisFamily::explicit(support)?
        }
        "point" => {
            let alpha = lines.field("alpha")?;
            let beta = lines.field("beta")?;
            HypothesisFamily::point(PointParams::new(bits, alpha, beta)?)
        }
        "boost-beta" => {
            let draws: usize = lines.field("draws")?;
            expect_inner(lines)?;
            boost_beta_draws(&parse_block(lines)?, draws)?
        }
        "boost-alpha" => {
            let rounds: usize = lines.field("rounds")?;
            expect_inner(lines)?;
            boost_alpha_rounds(&parse_block(lines)?, rounds)
        }
        _ => unreachable!(),
    };
    if family.bits() != bits {
        return Err(Error::Dimension {
            expected: bits,
            found: family.bits(),
        });
    }
    Ok(family.with_size_bound(size_bound))
}

fn expect_inner(lines: &mut Lines<'_>) -> Result<()> {
    match lines.next()? {
        "inner" => Ok(()),
        other => Err(lines.err(format!("expected `inner`, found `{other}`"))),
    }
}

/// One point per line as a bit string (character `i` is bit `i`).
pub fn write_points(points: &[DomainPoint]) -> String {
    points.iter().map(|p| p.to_bit_string() + "\n").collect()
}

pub fn parse_points(text: &str) -> Result<Vec<DomainPoint>> {
    let mut lines = Lines::new(text);
    let mut out: Vec<DomainPoint> = Vec::new();
    while lines.peek().is_some() {
        let l = lines.next()?;
        let p = DomainPoint::from_bit_string(l).map_err(|e| lines.err(e.to_string()))?;
        if let Some(first) = out.first() {
            if first.bits() != p.bits() {
                return Err(lines.err(format!(
                    "point `{l}` has {} bits, expected {}",
                    p.bits(),
                    first.bits()
                )));
            }
        }
        out.push(p);
    }
    if out.is_empty() {
        return Err(Error::Empty("point list"));
    }
    Ok(out)
}
