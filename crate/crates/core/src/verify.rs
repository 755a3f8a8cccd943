//! Self-checks run by `sawbox verify`: oracle values, engine equivalence,
//! the class inequality chain and the move constructions.

use std::collections::BTreeSet;

use rug::ops::Pow;
use serde::Serialize;

use crate::error::Result;
use crate::lattice::{classify, LatticeBox, SpanVariant, WalkClass};
use crate::moves::{antecedents, extend_spanning_walk, push_to_sides};
use crate::oracle::{oracle_spanning_counts, Oracle};
use crate::transfer::{RectTable, SweepKind};
use crate::BigCount;

/// Walks anywhere in the `L x L` box, `L = 1..=4`.
pub const ANYWHERE_SMALL: [u64; 4] = [12, 322, 14248, 1530196];
/// Walks with bounding box exactly `L x L`, `L = 1..=4`.
pub const EXACT_BBOX_SMALL: [u64; 4] = [8, 176, 9172, 1151156];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Quick,
    Full,
}

impl Level {
    pub fn from_tag(s: &str) -> Option<Self> {
        match s {
            "quick" => Some(Level::Quick),
            "full" => Some(Level::Full),
            _ => None,
        }
    }

    fn chain_side(self) -> u32 {
        match self {
            Level::Quick => 2,
            Level::Full => 3,
        }
    }

    fn engine_side(self) -> u32 {
        match self {
            Level::Quick => 2,
            Level::Full => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Claim {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Claim {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

pub fn run(level: Level) -> Result<Vec<Claim>> {
    let mut out = oracle_values(level)?;
    let table = RectTable::compute(level.engine_side(), SweepKind::Walks)?;
    out.extend(engine_equivalence(&table, level.engine_side())?);
    out.push(check_reconstruction(&table));
    for side in 1..=level.chain_side() {
        out.extend(inequality_chain(side)?);
    }
    for side in 1..=level.chain_side() {
        out.extend(move_claims(side)?);
    }
    Ok(out)
}

fn oracle_values(level: Level) -> Result<Vec<Claim>> {
    let oracle = Oracle::default();
    let mut out = Vec::new();
    for side in 1..=level.chain_side() {
        let b = LatticeBox::square(side);
        let v = oracle.count_many(&[WalkClass::Anywhere, WalkClass::ExactBBox], b)?;
        let want = [
            ANYWHERE_SMALL[side as usize - 1],
            EXACT_BBOX_SMALL[side as usize - 1],
        ];
        out.push(Claim::new(
            format!("oracle A_{side}, exact-bbox {side}x{side}"),
            v[0] == want[0] && v[1] == want[1],
            format!("{} {} (want {} {})", v[0], v[1], want[0], want[1]),
        ));
    }
    Ok(out)
}

/// Transfer-matrix `N` and exact-bounding-box entries against the oracle for
/// all `h <= l <= max_side`.
pub fn engine_equivalence(table: &RectTable, max_side: u32) -> Result<Vec<Claim>> {
    let oracle = Oracle::default();
    let mut bad = Vec::new();
    let mut checked = 0;
    for l in 0..=max_side {
        for h in 0..=l {
            let v = oracle.count_many(
                &[WalkClass::Anywhere, WalkClass::ExactBBox],
                LatticeBox::new(l, h),
            )?;
            checked += 1;
            if table.n.get(&(h, l)) != Some(&v[0]) || table.exact.get(&(h, l)) != Some(&v[1]) {
                bad.push(format!("({h},{l})"));
            }
        }
    }
    Ok(vec![Claim::new(
        format!("engine equivalence h <= l <= {max_side}"),
        bad.is_empty(),
        if bad.is_empty() {
            format!("{checked} rectangles agree")
        } else {
            format!("mismatch at {}", bad.join(" "))
        },
    )])
}

/// `sum (h-a+1)(l-b+1) exact[a][b] = N[h][l]` for every computed entry.
pub fn check_reconstruction(table: &RectTable) -> Claim {
    let mut bad = Vec::new();
    for (&(h, l), n) in &table.n {
        match table.reconstruct_n(h, l) {
            Ok(v) if &v == n => {}
            Ok(_) => bad.push(format!("({h},{l})")),
            Err(e) => bad.push(format!("({h},{l}): {e}")),
        }
    }
    Claim::new(
        "reconstruction identity",
        bad.is_empty(),
        if bad.is_empty() {
            format!("{} entries", table.n.len())
        } else {
            format!("fails at {}", bad.join(" "))
        },
    )
}

/// Class counts in the `side x side` box used by the chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainCounts {
    pub side: u32,
    pub r: BigCount,
    pub s: BigCount,
    pub m: BigCount,
    pub m_hat: BigCount,
    pub a: BigCount,
}

impl ChainCounts {
    pub fn compute(side: u32) -> Result<Self> {
        let v = SpanVariant::AtLeastOneDirection;
        let counts = Oracle::default().count_many(
            &[
                WalkClass::OppositeCorners,
                WalkClass::OppositeSides,
                WalkClass::SpanSquare(v),
                WalkClass::Anywhere,
            ],
            LatticeBox::square(side),
        )?;
        let [r, s, m, a]: [BigCount; 4] = counts.try_into().expect("four classes");
        Ok(ChainCounts {
            side,
            r,
            s,
            m,
            m_hat: oracle_spanning_counts(side, v)?.m_hat,
            a,
        })
    }

    /// `A_L` plus the `(L+1)^2` single-vertex walks, matching the `M_0 = 1`
    /// convention inside `m_hat`.
    pub fn a_with_points(&self) -> BigCount {
        let k = BigCount::from(self.side + 1);
        BigCount::from(&self.a + k.square())
    }

    pub fn chain_holds(&self) -> bool {
        self.r <= self.s
            && self.s <= self.m
            && self.m <= self.m_hat
            && self.m_hat <= self.a_with_points()
    }

    pub fn sandwich_holds(&self) -> bool {
        let k = BigCount::from(self.side + 1);
        self.a_with_points() <= BigCount::from(k.square_ref()) * &self.m_hat
    }

    /// `S_L <= M_L <= (L+1) 3^(L+1) S_L / 2`.
    pub fn span_bound_holds(&self) -> bool {
        let bound = BigCount::from(self.side + 1) * BigCount::from(3).pow(self.side + 1) * &self.s;
        self.s <= self.m && BigCount::from(2) * &self.m <= bound
    }
}

pub fn inequality_chain(side: u32) -> Result<Vec<Claim>> {
    let c = ChainCounts::compute(side)?;
    let d = format!(
        "R={} S={} M={} M^={} A={} (+{} points)",
        c.r,
        c.s,
        c.m,
        c.m_hat,
        c.a,
        (side + 1) * (side + 1)
    );
    Ok(vec![
        Claim::new(
            format!("chain R <= S <= M <= M^ <= A, L={side}"),
            c.chain_holds(),
            d.clone(),
        ),
        Claim::new(
            format!("A <= (L+1)^2 M^, L={side}"),
            c.sandwich_holds(),
            d.clone(),
        ),
        Claim::new(
            format!("S <= M <= (L+1) 3^(L+1) S / 2, L={side}"),
            c.span_bound_holds(),
            d,
        ),
    ])
}

pub fn move_claims(side: u32) -> Result<Vec<Claim>> {
    let oracle = Oracle::default();
    let span = WalkClass::SpanSquare(SpanVariant::AtLeastOneDirection);
    let walks = oracle.walks(span, LatticeBox::square(side))?;
    let mut out = Vec::new();

    let mut images = BTreeSet::new();
    let mut spans = true;
    for w in &walks {
        let img = extend_spanning_walk(w, side)?;
        spans &= classify(&img, LatticeBox::square(side + 1), span)?;
        images.insert(img);
    }
    out.push(Claim::new(
        format!("extension injective on M_{side}"),
        spans && images.len() == walks.len(),
        format!("{} walks, {} distinct images", walks.len(), images.len()),
    ));

    let mut worst = 0;
    let mut landed = true;
    for w in &walks {
        let (v, trace) = push_to_sides(w, side)?;
        landed &= classify(&v, LatticeBox::square(side), WalkClass::OppositeSides)?;
        worst = worst.max(trace.len());
    }
    out.push(Claim::new(
        format!("push to sides, L={side}"),
        landed && worst <= side as usize,
        format!("longest trace {worst} moves"),
    ));

    let mut largest = 0;
    for w in oracle.walks(WalkClass::Anywhere, LatticeBox::square(side))? {
        for e in [w.start(), w.end()] {
            largest = largest.max(antecedents(&w, e, side)?.len());
        }
    }
    out.push(Claim::new(
        format!("antecedent sets <= 3, L={side}"),
        largest <= 3,
        format!("largest {largest}"),
    ));
    Ok(out)
}
