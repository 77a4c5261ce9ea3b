//! Finite-window scans of the families `Q(sqrt(n - m^3))` and `Q(cbrt(n))`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use rayon::prelude::*;

use crate::arith::{exact_root, is_prime, squarefree_kernel};
use crate::cubic::{class_group_cubic_with, make_field};
use crate::error::{Error, Result};
use crate::quad::{class_group_with, norm_power_class, QuadClassGroup, QuadField};

/// Largest `u` tried in the specialization search.
pub const U_MAX: i64 = 1_000;
pub const MAX_ROWS: i64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Specialization {
    pub u: i64,
    pub w: i64,
    pub order: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassData {
    pub h: u64,
    pub divisors: Vec<u64>,
    pub l_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowStatus {
    Computed(ClassData),
    Skipped(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyRow {
    pub m: i64,
    pub raw: i128,
    pub d: i64,
    pub discriminant: i64,
    pub status: RowStatus,
    pub specialization: Option<Specialization>,
}

impl FamilyRow {
    pub fn l_rank(&self) -> Option<usize> {
        match &self.status {
            RowStatus::Computed(c) => Some(c.l_rank),
            RowStatus::Skipped(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Constant,
    NotConstant,
    Vacuous,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Constant => "constant",
            Verdict::NotConstant => "not constant",
            Verdict::Vacuous => "vacuous",
        }
    }
}

/// Summary over the computed rows. Counterexamples are the keys whose rank
/// differs from the most frequent one (smallest rank on ties).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanSummary {
    pub min: Option<usize>,
    pub max: Option<usize>,
    pub histogram: BTreeMap<usize, usize>,
    pub verdict: Verdict,
    pub counterexamples: Vec<i64>,
    pub skipped: Vec<i64>,
    pub excluded: Vec<i64>,
}

impl ScanSummary {
    fn from_ranks(ranks: &[(i64, Option<usize>)], excluded: Vec<i64>) -> Self {
        let mut histogram = BTreeMap::new();
        for r in ranks.iter().filter_map(|(_, r)| *r) {
            *histogram.entry(r).or_insert(0) += 1;
        }
        let verdict = verdict(histogram.keys().copied());
        let mode = histogram
            .iter()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
            .map(|(r, _)| *r);
        let counterexamples = ranks
            .iter()
            .filter(|(_, r)| r.is_some() && *r != mode)
            .map(|(k, _)| *k)
            .collect();
        let skipped = ranks
            .iter()
            .filter(|(_, r)| r.is_none())
            .map(|(k, _)| *k)
            .collect();
        ScanSummary {
            min: histogram.keys().next().copied(),
            max: histogram.keys().next_back().copied(),
            histogram,
            verdict,
            counterexamples,
            skipped,
            excluded,
        }
    }
}

/// "constant" exactly when the ranks take one distinct value.
pub fn verdict(ranks: impl IntoIterator<Item = usize>) -> Verdict {
    let mut seen = ranks.into_iter().collect::<Vec<_>>();
    seen.sort_unstable();
    seen.dedup();
    match seen.len() {
        0 => Verdict::Vacuous,
        1 => Verdict::Constant,
        _ => Verdict::NotConstant,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyReport {
    pub n: i64,
    pub l: u64,
    pub m_from: i64,
    pub m_to: i64,
    pub rows: Vec<FamilyRow>,
    pub summary: ScanSummary,
}

fn check_range(from: i64, to: i64) -> Result<()> {
    if from > to {
        return Err(Error::invalid("empty-range", format!("{from} > {to}")));
    }
    if (to as i128 - from as i128) >= MAX_ROWS as i128 {
        return Err(Error::invalid(
            "range-too-large",
            format!("at most {MAX_ROWS} values per scan"),
        ));
    }
    Ok(())
}

/// First `u` in `1..=U_MAX` with `u^2 - d = w^l`, `w > 1`, for which the
/// norm-power class is defined.
pub fn specialize(field: &QuadField, l: u32) -> Option<Specialization> {
    let d = field.d() as i128;
    (1..=U_MAX).find_map(|u| {
        let t = (u as i128 * u as i128 - d) as u128;
        let w = exact_root(t, l)?;
        if w < 2 {
            return None;
        }
        let c = norm_power_class(field, u, i64::try_from(w).ok()?, l).ok()?;
        Some(Specialization {
            u,
            w: w as i64,
            order: c.order,
        })
    })
}

pub fn scan_quadratic(n: i64, l: u64, m_from: i64, m_to: i64, budget: u64) -> Result<FamilyReport> {
    if !is_prime(l as u128) || l > u32::MAX as u64 {
        return Err(Error::invalid("not-prime", format!("l = {l} is not prime")));
    }
    check_range(m_from, m_to)?;
    let ms: Vec<i64> = (m_from..=m_to).collect();
    let cache: Mutex<HashMap<i64, QuadClassGroup>> = Mutex::new(HashMap::new());
    let rows: Vec<Option<FamilyRow>> = ms
        .par_iter()
        .map(|&m| quadratic_row(n, l, m, budget, &cache))
        .collect::<Result<_>>()?;
    let excluded = ms
        .iter()
        .zip(&rows)
        .filter(|(_, r)| r.is_none())
        .map(|(m, _)| *m)
        .collect();
    let rows: Vec<FamilyRow> = rows.into_iter().flatten().collect();
    let ranks: Vec<_> = rows.iter().map(|r| (r.m, r.l_rank())).collect();
    Ok(FamilyReport {
        n,
        l,
        m_from,
        m_to,
        summary: ScanSummary::from_ranks(&ranks, excluded),
        rows,
    })
}

fn quadratic_row(
    n: i64,
    l: u64,
    m: i64,
    budget: u64,
    cache: &Mutex<HashMap<i64, QuadClassGroup>>,
) -> Result<Option<FamilyRow>> {
    let raw = n as i128 - (m as i128).pow(3);
    if raw >= 0 {
        return Ok(None);
    }
    let (kernel, _) = squarefree_kernel(raw)?;
    let skipped = |d: i64, disc: i64, why: String| FamilyRow {
        m,
        raw,
        d,
        discriminant: disc,
        status: RowStatus::Skipped(why),
        specialization: None,
    };
    let Ok(d) = i64::try_from(kernel) else {
        return Ok(Some(skipped(0, 0, "out-of-range".into())));
    };
    let field = match QuadField::new(d) {
        Ok(f) => f,
        Err(e) => return Ok(Some(skipped(d, 0, e.code().into()))),
    };
    let disc = field.discriminant();
    let cached = cache.lock().expect("cache lock").get(&disc).cloned();
    let group = match cached {
        Some(g) => g,
        None => match class_group_with(&field, budget) {
            Ok(g) => {
                cache.lock().expect("cache lock").insert(disc, g.clone());
                g
            }
            Err(e) if e.is_limit() => return Ok(Some(skipped(d, disc, "limit-exceeded".into()))),
            Err(e) => return Ok(Some(skipped(d, disc, e.code().into()))),
        },
    };
    Ok(Some(FamilyRow {
        m,
        raw,
        d,
        discriminant: disc,
        status: RowStatus::Computed(ClassData {
            h: group.class_number,
            divisors: group.structure.elementary_divisors.clone(),
            l_rank: group.l_rank(l),
        }),
        specialization: specialize(&field, l as u32),
    }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicRow {
    pub n: i64,
    pub status: RowStatus,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicFamilyReport {
    pub n_from: i64,
    pub n_to: i64,
    pub rows: Vec<CubicRow>,
    pub summary: ScanSummary,
}

/// Class groups of `Q(cbrt(n))` for squarefree `n` in the range; other
/// values appear as skipped rows with a reason. Ranks are 3-ranks.
pub fn scan_cubic(n_from: i64, n_to: i64, budget: u64) -> Result<CubicFamilyReport> {
    check_range(n_from, n_to)?;
    let rows: Vec<CubicRow> = (n_from..=n_to)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&n| CubicRow {
            n,
            status: cubic_status(n, budget),
        })
        .collect();
    let ranks: Vec<_> = rows
        .iter()
        .map(|r| match &r.status {
            RowStatus::Computed(c) => (r.n, Some(c.l_rank)),
            RowStatus::Skipped(_) => (r.n, None),
        })
        .collect();
    Ok(CubicFamilyReport {
        n_from,
        n_to,
        summary: ScanSummary::from_ranks(&ranks, Vec::new()),
        rows,
    })
}

fn cubic_status(n: i64, budget: u64) -> RowStatus {
    let group = make_field(n).and_then(|f| class_group_cubic_with(&f, budget));
    match group {
        Ok(g) => RowStatus::Computed(ClassData {
            h: g.class_number,
            divisors: g.structure.elementary_divisors.clone(),
            l_rank: g.l_rank(3),
        }),
        Err(e) => RowStatus::Skipped(e.code().into()),
    }
}
