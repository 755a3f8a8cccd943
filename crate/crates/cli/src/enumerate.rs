use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::Serialize;
use serde_json::json;

use sawbox::analysis::Series;
use sawbox::io::{
    atomic_write, read_rect_table, sha256_hex, write_rect_table, write_series_file, SeriesFile,
};
use sawbox::lattice::{LatticeBox, SpanVariant, WalkClass};
use sawbox::oracle::{oracle_spanning_counts, Oracle, OracleConfig, DEFAULT_BUDGET};
use sawbox::transfer::{RectTable, SweepKind};
use sawbox::{BigCount, Error};

use crate::{emit, new_report, Fallible};

#[derive(Args, Serialize)]
pub struct EnumerateArgs {
    #[arg(long, value_enum)]
    pub class: ClassArg,
    #[arg(long, value_enum, default_value = "tm")]
    pub engine: Engine,
    #[arg(long = "max-L")]
    pub max_l: u32,
    #[arg(long = "min-L", default_value_t = 1)]
    pub min_l: u32,
    /// Reading of "spans the square" for the span classes.
    #[arg(long = "span-variant", value_enum, default_value = "one-direction")]
    pub span_variant: SpanArg,
    /// Oracle work cap in walk prefixes.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Rectangle-table cache for the transfer-matrix engine.
    #[arg(long = "cache-dir", env = "SAWBOX_CACHE")]
    pub cache_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassArg {
    /// Walks anywhere in the box (A_L).
    Anywhere,
    /// Walks with bounding box exactly L x L.
    ExactBbox,
    /// Every rectangle count N(h,l) and exact-bounding-box count up to L.
    Rect,
    /// Self-avoiding polygons (P_L).
    Cycles,
    /// Corner to opposite corner (R_L).
    OppositeCorners,
    /// Endpoints on opposite sides (S_L).
    OppositeSides,
    /// Walks spanning the box (M_L).
    Span,
    /// Sum of M_l for l <= L, with M_0 = 1.
    SpanHat,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Oracle,
    Tm,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpanArg {
    OneDirection,
    Exact,
}

impl SpanArg {
    fn variant(self) -> SpanVariant {
        match self {
            SpanArg::OneDirection => SpanVariant::AtLeastOneDirection,
            SpanArg::Exact => SpanVariant::ExactSquare,
        }
    }
}

impl ClassArg {
    pub fn tag(self) -> &'static str {
        match self {
            ClassArg::Anywhere => "anywhere",
            ClassArg::ExactBbox => "exact-bbox",
            ClassArg::Rect => "rect",
            ClassArg::Cycles => "cycles",
            ClassArg::OppositeCorners => "opposite-corners",
            ClassArg::OppositeSides => "opposite-sides",
            ClassArg::Span => "span",
            ClassArg::SpanHat => "span-hat",
        }
    }
}

fn oracle_value(oracle: &Oracle, class: ClassArg, side: u32, v: SpanVariant) -> Fallible<BigCount> {
    let b = LatticeBox::square(side);
    Ok(match class {
        ClassArg::Anywhere => oracle.count(WalkClass::Anywhere, b)?,
        ClassArg::ExactBbox => oracle.count(WalkClass::ExactBBox, b)?,
        ClassArg::Cycles => oracle.count_polygons(b)?,
        ClassArg::OppositeCorners => oracle.count(WalkClass::OppositeCorners, b)?,
        ClassArg::OppositeSides => oracle.count(WalkClass::OppositeSides, b)?,
        ClassArg::Span => oracle.count(WalkClass::SpanSquare(v), b)?,
        ClassArg::SpanHat => oracle_spanning_counts(side, v)?.m_hat,
        ClassArg::Rect => unreachable!("handled separately"),
    })
}

fn cache_path(dir: &Path, kind: SweepKind) -> PathBuf {
    dir.join(match kind {
        SweepKind::Walks => "rect-walks.txt",
        SweepKind::Polygons => "rect-polygons.txt",
    })
}

/// Rectangle table up to `max_side`, read from and written back to the
/// cache when one is configured.
pub fn rect_table(max_side: u32, kind: SweepKind, cache: Option<&Path>) -> Fallible<RectTable> {
    let Some(dir) = cache else {
        return Ok(RectTable::compute(max_side, kind)?);
    };
    let path = cache_path(dir, kind);
    let mut table = match std::fs::read_to_string(&path) {
        Ok(text) => {
            read_rect_table(&text).map_err(|e| format!("corrupt cache {}: {e}", path.display()))?
        }
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => RectTable::new(kind),
        Err(e) => return Err(e.into()),
    };
    if table.max_side().is_none_or(|m| m < max_side) {
        table.extend_to(max_side)?;
        atomic_write(&path, write_rect_table(&table).as_bytes())?;
    }
    Ok(table)
}

fn rect_csv(t: &RectTable, max_side: u32) -> String {
    let mut out = String::from("h,l,N,exact\n");
    for l in 0..=max_side {
        for h in 0..=l {
            out.push_str(&format!("{h},{l},{},{}\n", t.n[&(h, l)], t.exact[&(h, l)]));
        }
    }
    out
}

fn rect_oracle(oracle: &Oracle, max_side: u32) -> Fallible<RectTable> {
    let mut t = RectTable::new(SweepKind::Walks);
    for l in 0..=max_side {
        for h in 0..=l {
            let v = oracle.count_many(
                &[WalkClass::Anywhere, WalkClass::ExactBBox],
                LatticeBox::new(l, h),
            )?;
            t.insert_n(h, l, v[0].clone());
            t.exact.insert((h, l), v[1].clone());
            t.exact.insert((l, h), v[1].clone());
        }
    }
    Ok(t)
}

pub fn run(a: &EnumerateArgs, job: serde_json::Value) -> Fallible {
    if a.min_l > a.max_l {
        return Err(format!("--min-L {} exceeds --max-L {}", a.min_l, a.max_l).into());
    }
    let oracle = Oracle::new(OracleConfig { budget: a.budget });
    let kind = if a.class == ClassArg::Cycles {
        SweepKind::Polygons
    } else {
        SweepKind::Walks
    };
    let text = if a.class == ClassArg::Rect {
        let t = match a.engine {
            Engine::Tm => rect_table(a.max_l, kind, a.cache_dir.as_deref())?,
            Engine::Oracle => rect_oracle(&oracle, a.max_l)?,
        };
        rect_csv(&t, a.max_l)
    } else {
        let mut s = Series::new(a.class.tag());
        match a.engine {
            Engine::Oracle => {
                for side in a.min_l..=a.max_l {
                    s.push_exact(
                        side,
                        oracle_value(&oracle, a.class, side, a.span_variant.variant())?,
                    )?;
                }
            }
            Engine::Tm => {
                if !matches!(
                    a.class,
                    ClassArg::Anywhere | ClassArg::ExactBbox | ClassArg::Cycles
                ) {
                    return Err(Error::Domain(format!(
                        "class {} is only available from the oracle engine",
                        a.class.tag()
                    ))
                    .into());
                }
                let t = rect_table(a.max_l, kind, a.cache_dir.as_deref())?;
                for side in a.min_l..=a.max_l {
                    let v = match a.class {
                        ClassArg::ExactBbox => t.exact[&(side, side)].clone(),
                        _ => t.assemble(side)?,
                    };
                    s.push_exact(side, v)?;
                }
            }
        }
        let engine = match a.engine {
            Engine::Oracle => "oracle",
            Engine::Tm => "tm",
        };
        let file = SeriesFile::new(s)
            .with("class", a.class.tag())
            .with("engine", engine)
            .with("provenance", "exact");
        write_series_file(&file)
    };
    emit(a.output.as_deref(), &text)?;
    if let Some(path) = &a.report {
        let mut r = new_report(job, &[])?;
        r.results = json!({ "output_sha256": sha256_hex(text.as_bytes()) });
        atomic_write(path, r.to_pretty_json().as_bytes())?;
    }
    Ok(())
}

/// Fails unless the first terms of `s` equal the oracle counts of `class`.
pub fn check_against_oracle(s: &Series, class: ClassArg, max_l: u32) -> Fallible {
    if class == ClassArg::Rect {
        return Err("rect tables cannot be checked term by term".into());
    }
    let oracle = Oracle::default();
    for t in s
        .terms()
        .iter()
        .filter(|t| t.index >= 1 && t.index <= max_l)
    {
        let want = oracle_value(&oracle, class, t.index, SpanVariant::AtLeastOneDirection)?;
        if t.value.to_string() != want.to_string() {
            return Err(format!(
                "{} term {} is {} but the oracle gives {} for class {}",
                s.name,
                t.index,
                t.value,
                want,
                class.tag()
            )
            .into());
        }
    }
    Ok(())
}
