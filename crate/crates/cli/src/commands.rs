use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use unital_core::collineation::two_point_stabilizer;
use unital_core::intersection::{bezout_reconcile, multiplicity_at, CurveEquation};
use unital_core::io::{read_unital, write_quotient_plane, write_unital};
use unital_core::quotient::{build_quotient_plane, verify_projective_plane};
use unital_core::theorem::{check_theorem, default_max_pairs, scan_pairs, select_pairs};
use unital_core::unital::{buekenhout_metz, hermitian_curve, is_unital, HermitianForm};
use unital_core::{Error, FieldTower, Fq2, ProjPoint, Projectivity, Unital};

use crate::report::{ReportBuilder, RunReport};

pub fn parse_element(t: &FieldTower, code: u32, name: &str) -> Result<Fq2> {
    t.element(code)
        .with_context(|| format!("--{name} {code} is not an element of GF({})", t.q2()))
}

fn parse_point(t: &FieldTower, s: &str) -> Result<ProjPoint> {
    let p: ProjPoint = s
        .parse()
        .map_err(|e: String| anyhow::anyhow!("point {s:?}: {e}"))?;
    if p.coords().iter().any(|c| c.0 >= t.q2()) {
        bail!("point {s:?} has codes outside GF({})", t.q2());
    }
    Ok(p)
}

fn load_unital(t: &Arc<FieldTower>, path: &Path) -> Result<Unital> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    read_unital(&text, t).with_context(|| format!("loading {}", path.display()))
}

fn save(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn unital_checks(rep: &mut ReportBuilder, u: &Unital) -> Result<()> {
    let v = is_unital(u.tower(), u.points())?;
    rep.check(
        "unital",
        v.is_unital(),
        v.witness.map(|(l, c)| format!("line {l} meets the set in {c} points")),
    );
    rep.data("points", u.len());
    rep.data("kind", u.kind().to_string());
    Ok(())
}

pub fn hermitian(cmd: String, t: &Arc<FieldTower>, b: Fq2, out: &Path) -> Result<RunReport> {
    if b.is_zero() {
        bail!("--b must be nonzero");
    }
    let u = hermitian_curve(t, b)?;
    let mut rep = ReportBuilder::new(cmd, t);
    unital_checks(&mut rep, &u)?;
    save(out, &write_unital(&u))?;
    rep.data("file", out.display().to_string());
    Ok(rep.finish())
}

pub fn bm(cmd: String, t: &Arc<FieldTower>, alpha: Fq2, beta: Fq2, out: &Path) -> Result<RunReport> {
    let u = buekenhout_metz(t, alpha, beta)?;
    let mut rep = ReportBuilder::new(cmd, t);
    unital_checks(&mut rep, &u)?;
    save(out, &write_unital(&u))?;
    rep.data("file", out.display().to_string());
    Ok(rep.finish())
}

pub fn image(cmd: String, t: &Arc<FieldTower>, input: &Path, seed: u64, out: &Path) -> Result<RunReport> {
    let u = load_unital(t, input)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = Projectivity::random(t, &mut rng);
    let v = u.image(&g);
    let mut rep = ReportBuilder::new(cmd, t);
    unital_checks(&mut rep, &v)?;
    rep.data("projectivity", g);
    save(out, &write_unital(&v))?;
    rep.data("file", out.display().to_string());
    Ok(rep.finish())
}

pub enum PairChoice {
    One(String, String),
    All { max_pairs: Option<usize>, seed: u64 },
}

pub fn stabilizer(cmd: String, t: &Arc<FieldTower>, file: &Path, pairs: PairChoice) -> Result<RunReport> {
    let u = load_unital(t, file)?;
    let mut rep = ReportBuilder::new(cmd, t);
    rep.data("points", u.len());
    match pairs {
        PairChoice::One(a, b) => {
            let (p, q) = (parse_point(t, &a)?, parse_point(t, &b)?);
            if p == q {
                bail!("P and Q must be distinct");
            }
            for x in [&p, &q] {
                if !u.contains(x) {
                    bail!("{x} is not a point of the unital");
                }
            }
            let cert = two_point_stabilizer(&u, &p, &q)?;
            rep.check("stabiliser computed", true, None);
            rep.data("certificate", cert);
        }
        PairChoice::All { max_pairs, seed } => {
            let cap = max_pairs.or_else(|| default_max_pairs(t.q()));
            let chosen = select_pairs(u.len(), cap, seed);
            let scan = scan_pairs(&u, &chosen, false)?;
            rep.check("stabiliser computed", true, None);
            let hist: Vec<HistogramRow> = scan
                .histogram
                .iter()
                .map(|(&order, &pairs)| HistogramRow { order, pairs })
                .collect();
            rep.data("pairs_total", scan.total_pairs);
            rep.data("pairs_examined", scan.examined);
            rep.data("seed", seed);
            rep.data("histogram", hist);
        }
    }
    Ok(rep.finish())
}

#[derive(Serialize)]
struct HistogramRow {
    order: usize,
    pairs: usize,
}

pub fn quotient_plane(
    cmd: String,
    t: &Arc<FieldTower>,
    lambda: Option<Fq2>,
    out: Option<&Path>,
) -> Result<RunReport> {
    let lambda = lambda.unwrap_or_else(|| t.primitive_root());
    let pi = build_quotient_plane(t, lambda)?;
    let q = t.q() as usize;
    let mut rep = ReportBuilder::new(cmd, t);
    let census = pi.census();
    rep.check(
        "orbit census",
        census.long == q * q && census.short == q + 1,
        Some(format!("{} long, {} short orbits", census.long, census.short)),
    );
    let cert = verify_projective_plane(&pi);
    for a in &cert.axioms {
        rep.check(a.name, a.passed, a.witness.clone());
    }
    rep.data("lambda", lambda);
    rep.data("points", pi.points().len());
    rep.data("lines", pi.lines().len());
    rep.data("census", census);
    if let Some(path) = out {
        save(path, &write_quotient_plane(&pi))?;
        rep.data("file", path.display().to_string());
    }
    Ok(rep.finish())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Case {
    Lemma2,
    Lemma3,
    Bezout,
}

pub struct CurveChoice {
    pub b: Fq2,
    pub d: Option<Fq2>,
    pub c: Option<Fq2>,
}

pub fn multiplicity(cmd: String, t: &Arc<FieldTower>, case: Case, sel: CurveChoice) -> Result<RunReport> {
    let q = t.q();
    let h = HermitianForm::curve(t, sel.b)?;
    let mut rep = ReportBuilder::new(cmd, t);
    rep.data("b", sel.b);
    match case {
        Case::Lemma2 | Case::Lemma3 => {
            let (name, f) = if case == Case::Lemma2 {
                let d = match sel.d {
                    Some(d) => d,
                    None => t.nonzero_elements().find(|&d| d != sel.b).expect("|GF(q²)*| > 1"),
                };
                if d == sel.b {
                    bail!("--d must differ from --b");
                }
                rep.data("d", d);
                (format!("H_{d}"), HermitianForm::curve(t, d)?)
            } else {
                let c = sel.c.unwrap_or(Fq2::ONE);
                rep.data("c", c);
                (format!("C_{c}"), HermitianForm::cone(t, c)?)
            };
            let m = multiplicity_at(t, &h, &CurveEquation::from(f), &ProjPoint::O)?;
            rep.check(
                format!("I(O, H_{} ∩ {name}) = q+1", sel.b),
                m == q + 1,
                Some(format!("multiplicity {m}")),
            );
            rep.data("multiplicity", m);
        }
        Case::Bezout => {
            let f = match (sel.d, sel.c) {
                (Some(_), Some(_)) => bail!("give at most one of --d and --c"),
                (Some(d), None) => HermitianForm::curve(t, d)?,
                (None, Some(c)) => HermitianForm::cone(t, c)?,
                (None, None) => {
                    let k = t
                        .subfield_elements()
                        .into_iter()
                        .find(|&k| !k.is_zero() && k != Fq2::ONE);
                    match k {
                        Some(k) => HermitianForm::curve(t, t.mul(sel.b, k))?,
                        None => HermitianForm::cone(t, t.frobenius(sel.b))?,
                    }
                }
            };
            if f.absolute_points(t) == h.absolute_points(t) {
                bail!("the two curves coincide");
            }
            let r = bezout_reconcile(t, &h, &f);
            match r {
                Ok(r) => {
                    rep.check("total within (q+1)^2", true, None);
                    if r.equality_checked {
                        rep.check("q+1 tangential points give total (q+1)^2", true, None);
                    }
                    rep.data("second", f);
                    rep.data("report", r);
                }
                Err(Error::BezoutMismatch { total, budget }) => {
                    rep.check(
                        "total within (q+1)^2",
                        false,
                        Some(format!("total {total} against budget {budget}")),
                    );
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    Ok(rep.finish())
}

#[derive(Serialize)]
struct CorpusEntry {
    file: String,
    kind: Option<String>,
    transitive_pair: Option<bool>,
    classical: Option<bool>,
    pairs_examined: Option<usize>,
    witness_pair: Option<(String, String)>,
    form: Option<HermitianForm>,
    rejected: Option<String>,
}

pub fn theorem(
    cmd: String,
    t: &Arc<FieldTower>,
    dir: &Path,
    max_pairs: Option<usize>,
    seed: u64,
) -> Result<RunReport> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    files.retain(|p| p.is_file());
    files.sort();
    if files.is_empty() {
        bail!("corpus {} is empty", dir.display());
    }
    let cap = max_pairs.or_else(|| default_max_pairs(t.q()));
    let mut rep = ReportBuilder::new(cmd, t);
    let mut entries = Vec::new();
    for path in &files {
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let u = match read_unital(&text, t) {
            Ok(u) => u,
            Err(Error::NotAUnital(why)) => {
                rep.check(format!("{name}: unital"), false, Some(why.clone()));
                entries.push(CorpusEntry {
                    file: name,
                    kind: None,
                    transitive_pair: None,
                    classical: None,
                    pairs_examined: None,
                    witness_pair: None,
                    form: None,
                    rejected: Some(why),
                });
                continue;
            }
            Err(e) => return Err(e).with_context(|| format!("loading {}", path.display())),
        };
        let v = check_theorem(&u, cap, seed)?;
        rep.check(
            format!("{name}: stabiliser side equals classical side"),
            v.agrees,
            Some(format!(
                "order q^2-1 pair: {}, Gram matrix: {}",
                v.transitive_pair, v.classical
            )),
        );
        entries.push(CorpusEntry {
            file: name,
            kind: Some(v.kind),
            transitive_pair: Some(v.transitive_pair),
            classical: Some(v.classical),
            pairs_examined: Some(v.scan.examined),
            witness_pair: v.scan.witness.map(|w| (w.p, w.q)),
            form: v.form,
            rejected: None,
        });
    }
    rep.data("max_pairs", cap);
    rep.data("seed", seed);
    rep.data("unitals", entries);
    Ok(rep.finish())
}
