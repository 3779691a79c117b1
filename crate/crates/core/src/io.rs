//! Text formats for unitals and quotient planes.
//!
//! Every file starts with the tower header
//! `tower p=<p> r=<r> modulus=<c0,...>`; readers compare it with the tower
//! the caller supplies and refuse to decode codes from a different field.
//! Lines starting with `#` are comments.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{FieldTower, Fq2};
use crate::plane::ProjPoint;
use crate::quotient::{BitMatrix, PlaneLine, QuotientPlane};
use crate::unital::{is_unital, Unital, UnitalKind};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Non-comment, non-blank lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// (p, r, modulus) from a header line.
pub fn parse_tower_header(line: &str) -> std::result::Result<(u32, u32, Vec<u32>), String> {
    let mut words = line.split_whitespace();
    if words.next() != Some("tower") {
        return Err("expected `tower p=.. r=.. modulus=..`".into());
    }
    let (mut p, mut r, mut m) = (None, None, None);
    for w in words {
        let (k, v) = w.split_once('=').ok_or_else(|| format!("bad field {w:?}"))?;
        let num = |s: &str| s.parse::<u32>().map_err(|e| format!("{s:?}: {e}"));
        match k {
            "p" => p = Some(num(v)?),
            "r" => r = Some(num(v)?),
            "modulus" => m = Some(v.split(',').map(num).collect::<std::result::Result<Vec<_>, _>>()?),
            _ => return Err(format!("unknown field {k:?}")),
        }
    }
    match (p, r, m) {
        (Some(p), Some(r), Some(m)) => Ok((p, r, m)),
        _ => Err("header needs p, r and modulus".into()),
    }
}

fn check_header(t: &FieldTower, line: usize, text: &str) -> Result<()> {
    let (p, r, m) = parse_tower_header(text).map_err(|e| parse_err(line, e))?;
    if p != t.p() || r != t.r() || m != t.modulus() {
        return Err(Error::TowerMismatch);
    }
    Ok(())
}

fn parse_code(t: &FieldTower, line: usize, s: &str) -> Result<Fq2> {
    let c: u32 = s.parse().map_err(|e| parse_err(line, format!("{s:?}: {e}")))?;
    t.element(c).map_err(|_| parse_err(line, format!("{c} is not an element code")))
}

fn parse_point(t: &FieldTower, line: usize, s: &str) -> Result<ProjPoint> {
    let p: ProjPoint = s.parse().map_err(|e: String| parse_err(line, e))?;
    if p.coords().iter().any(|c| c.0 >= t.q2()) {
        return Err(parse_err(line, format!("{s} has codes outside GF({})", t.q2())));
    }
    Ok(p)
}

fn parse_kind(t: &FieldTower, line: usize, rest: &str) -> Result<UnitalKind> {
    let mut words = rest.split_whitespace();
    let head = words.next().unwrap_or("");
    let mut field = |name: &str| -> Result<Fq2> {
        let w = words
            .next()
            .ok_or_else(|| parse_err(line, format!("missing {name}=")))?;
        let v = w
            .strip_prefix(name)
            .and_then(|v| v.strip_prefix('='))
            .ok_or_else(|| parse_err(line, format!("expected {name}=, got {w:?}")))?;
        parse_code(t, line, v)
    };
    match head {
        "hermitian" => Ok(UnitalKind::Hermitian { b: field("b")? }),
        "bm" => {
            let alpha = field("alpha")?;
            let beta = field("beta")?;
            Ok(UnitalKind::BuekenhoutMetz { alpha, beta })
        }
        "custom" => Ok(UnitalKind::Custom(
            rest.trim_start_matches("custom").trim().to_string(),
        )),
        _ => Err(parse_err(line, format!("unknown kind {head:?}"))),
    }
}

/// Unital file: header, `kind ...`, `points N`, then one `x:y:z` per line
/// in enumeration order.
pub fn write_unital(u: &Unital) -> String {
    let t = u.tower();
    let q = t.q();
    let mut out = format!(
        "{}\n# unital of order {q}: {} points, every line meets it in 1 or {} points\nkind {}\npoints {}\n",
        t.header(),
        u.len(),
        q + 1,
        u.kind(),
        u.len()
    );
    for p in u.points() {
        out.push_str(&p.to_string());
        out.push('\n');
    }
    out
}

/// Kind and point list of a unital file, without the unital check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointFile {
    pub kind: UnitalKind,
    pub points: Vec<ProjPoint>,
}

pub fn parse_point_file(text: &str, t: &FieldTower) -> Result<PointFile> {
    let mut lines = content_lines(text);
    let (n, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    check_header(t, n, header)?;
    let (n, kind_line) = lines.next().ok_or_else(|| parse_err(n, "missing kind line"))?;
    let rest = kind_line
        .strip_prefix("kind ")
        .ok_or_else(|| parse_err(n, "expected `kind ...`"))?;
    let kind = parse_kind(t, n, rest)?;
    let (n, count_line) = lines.next().ok_or_else(|| parse_err(n, "missing points line"))?;
    let count: usize = count_line
        .strip_prefix("points ")
        .and_then(|c| c.trim().parse().ok())
        .ok_or_else(|| parse_err(n, "expected `points N`"))?;
    let points = lines
        .map(|(n, l)| parse_point(t, n, l))
        .collect::<Result<Vec<_>>>()?;
    if points.len() != count {
        return Err(parse_err(n, format!("declared {count} points, found {}", points.len())));
    }
    Ok(PointFile { kind, points })
}

/// Parses and verifies a unital file; a failed secant census names the
/// offending line of the plane.
pub fn read_unital(text: &str, tower: &Arc<FieldTower>) -> Result<Unital> {
    let file = parse_point_file(text, tower)?;
    let verdict = is_unital(tower, &file.points)?;
    if !verdict.is_unital() {
        let msg = match verdict.witness {
            Some((l, c)) => format!("line {l} meets the set in {c} points"),
            None => format!("{} points, expected {}", verdict.size, verdict.expected_size),
        };
        return Err(Error::NotAUnital(msg));
    }
    Unital::new(Arc::clone(tower), file.points, file.kind)
}

/// The data a quotient-plane file carries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientPlaneRecord {
    pub lambda: Fq2,
    pub points: Vec<Vec<ProjPoint>>,
    pub lines: Vec<PlaneLine>,
    pub incidence: BitMatrix,
}

impl QuotientPlane {
    pub fn record(&self) -> QuotientPlaneRecord {
        QuotientPlaneRecord {
            lambda: self.lambda(),
            points: self.points().iter().map(|o| o.points.clone()).collect(),
            lines: self.lines().to_vec(),
            incidence: self.incidence().clone(),
        }
    }
}

/// Header, `lambda c`, `points N` with `id x:y:z ...` rows, `lines N` with
/// `id tag [param]` rows, then `incidence` and one hex row per point.
pub fn write_quotient_plane(pi: &QuotientPlane) -> String {
    let mut out = format!("{}\nlambda {}\npoints {}\n", pi.tower().header(), pi.lambda(), pi.points().len());
    for o in pi.points() {
        let pts: Vec<String> = o.points.iter().map(|p| p.to_string()).collect();
        out.push_str(&format!("{} {}\n", o.id, pts.join(" ")));
    }
    out.push_str(&format!("lines {}\n", pi.lines().len()));
    for (j, l) in pi.lines().iter().enumerate() {
        out.push_str(&format!("{j} {l}\n"));
    }
    out.push_str("incidence\n");
    for r in 0..pi.incidence().rows() {
        out.push_str(&pi.incidence().hex_row(r));
        out.push('\n');
    }
    out
}

fn expect_count(line: Option<(usize, &str)>, key: &str) -> Result<(usize, usize)> {
    let (n, l) = line.ok_or_else(|| parse_err(0, format!("missing `{key}` line")))?;
    let c = l
        .strip_prefix(key)
        .and_then(|c| c.trim().parse().ok())
        .ok_or_else(|| parse_err(n, format!("expected `{key} N`")))?;
    Ok((n, c))
}

fn expect_id(n: usize, word: Option<&str>, id: usize) -> Result<()> {
    match word.and_then(|w| w.parse::<usize>().ok()) {
        Some(i) if i == id => Ok(()),
        _ => Err(parse_err(n, format!("expected row id {id}"))),
    }
}

pub fn read_quotient_plane(text: &str, t: &FieldTower) -> Result<QuotientPlaneRecord> {
    let mut lines = content_lines(text);
    let (n, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    check_header(t, n, header)?;
    let (n, l) = lines.next().ok_or_else(|| parse_err(n, "missing lambda"))?;
    let lambda = parse_code(
        t,
        n,
        l.strip_prefix("lambda ").ok_or_else(|| parse_err(n, "expected `lambda c`"))?,
    )?;

    let (_, np) = expect_count(lines.next(), "points")?;
    let mut points = Vec::with_capacity(np);
    for id in 0..np {
        let (n, l) = lines.next().ok_or_else(|| parse_err(0, "truncated point table"))?;
        let mut words = l.split_whitespace();
        expect_id(n, words.next(), id)?;
        points.push(words.map(|w| parse_point(t, n, w)).collect::<Result<Vec<_>>>()?);
    }

    let (_, nl) = expect_count(lines.next(), "lines")?;
    let mut plane_lines = Vec::with_capacity(nl);
    for id in 0..nl {
        let (n, l) = lines.next().ok_or_else(|| parse_err(0, "truncated line table"))?;
        let mut words = l.split_whitespace();
        expect_id(n, words.next(), id)?;
        let line = match (words.next(), words.next()) {
            (Some("ly"), None) => PlaneLine::LY,
            (Some("hb"), Some(b)) => PlaneLine::Curve(parse_code(t, n, b)?),
            (Some("cc"), Some(c)) => PlaneLine::Cone(parse_code(t, n, c)?),
            _ => return Err(parse_err(n, format!("bad line row {l:?}"))),
        };
        plane_lines.push(line);
    }

    match lines.next() {
        Some((_, "incidence")) => {}
        Some((n, _)) => return Err(parse_err(n, "expected `incidence`")),
        None => return Err(parse_err(0, "missing incidence")),
    }
    let mut incidence = BitMatrix::new(np, nl);
    for r in 0..np {
        let (n, l) = lines.next().ok_or_else(|| parse_err(0, "truncated incidence"))?;
        incidence.set_hex_row(r, l).map_err(|e| parse_err(n, e))?;
    }
    if let Some((n, _)) = lines.next() {
        return Err(parse_err(n, "trailing content"));
    }
    Ok(QuotientPlaneRecord {
        lambda,
        points,
        lines: plane_lines,
        incidence,
    })
}
