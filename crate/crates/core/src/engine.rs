//! Relocation arithmetic over an inclusive window of periods: aggregation,
//! histogram totals, link visibility and per-building summaries.
//!
//! Diagonal entries (moves within one building) are kept in the aggregate
//! and reported as `internal` on summaries, but never become links or count
//! toward period totals.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::dataset_io::{FlowMatrix, RelocationSeries};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WindowError {
    #[error("window out of range")]
    OutOfRange { lo: usize, hi: usize, periods: usize },
    #[error("lo > hi")]
    Inverted { lo: usize, hi: usize },
}

/// Inclusive range of period indices `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct TimeWindow {
    lo: usize,
    hi: usize,
}

impl TimeWindow {
    /// Range is checked before order, so `from=9&to=1` on four periods is
    /// out of range rather than inverted.
    pub fn new(lo: usize, hi: usize, periods: usize) -> Result<Self, WindowError> {
        if lo >= periods || hi >= periods {
            return Err(WindowError::OutOfRange { lo, hi, periods });
        }
        if lo > hi {
            return Err(WindowError::Inverted { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    /// Every period. Panics if `periods == 0`.
    pub fn full(periods: usize) -> Self {
        assert!(periods > 0, "series has at least one period");
        Self {
            lo: 0,
            hi: periods - 1,
        }
    }

    pub fn lo(self) -> usize {
        self.lo
    }

    pub fn hi(self) -> usize {
        self.hi
    }

    /// Number of periods covered.
    pub fn width(self) -> usize {
        self.hi - self.lo + 1
    }

    pub fn contains(self, period: usize) -> bool {
        (self.lo..=self.hi).contains(&period)
    }

    /// Moves the left handle, keeping it within `[0, hi]`.
    pub fn with_lo(self, lo: usize) -> Self {
        Self {
            lo: lo.min(self.hi),
            hi: self.hi,
        }
    }

    /// Moves the right handle, keeping it within `[lo, periods - 1]`.
    pub fn with_hi(self, hi: usize, periods: usize) -> Self {
        Self {
            lo: self.lo,
            hi: hi.clamp(self.lo, periods - 1),
        }
    }
}

/// Slides both bounds by `delta`, clamped so the window keeps its width and
/// stays within `[0, periods - 1]`.
pub fn shift_window(w: TimeWindow, delta: i64, periods: usize) -> TimeWindow {
    let max_lo = (periods - w.width()) as i64;
    let lo = (w.lo as i64).saturating_add(delta).clamp(0, max_lo) as usize;
    TimeWindow {
        lo,
        hi: lo + w.width() - 1,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AggregateMatrix {
    pub window: TimeWindow,
    pub flows: FlowMatrix,
}

impl AggregateMatrix {
    pub fn size(&self) -> usize {
        self.flows.size()
    }

    pub fn get(&self, from: usize, to: usize) -> u64 {
        self.flows.get(from, to)
    }
}

/// Element-wise sum of the window's matrices.
pub fn aggregate(
    series: &RelocationSeries,
    window: TimeWindow,
) -> Result<AggregateMatrix, WindowError> {
    let window = TimeWindow::new(window.lo, window.hi, series.periods())?;
    let mut flows = FlowMatrix::zeros(series.buildings());
    let acc = flows.as_mut_slice();
    for m in &series.matrices()[window.lo..=window.hi] {
        for (a, &v) in acc.iter_mut().zip(m.as_slice()) {
            *a += v;
        }
    }
    Ok(AggregateMatrix { window, flows })
}

/// Off-diagonal total of every period, for the slider histogram.
pub fn period_totals(series: &RelocationSeries) -> Vec<u64> {
    series
        .matrices()
        .iter()
        .map(FlowMatrix::off_diagonal_total)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkClass {
    Background,
    Focus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Link {
    pub src: usize,
    pub dst: usize,
    pub count: u64,
    pub class: LinkClass,
}

/// Links to draw for the current view, sorted by `(src, dst)`.
///
/// A nonzero pair touching the focus set (selected buildings plus the armed
/// one) is always a focus link. Any other pair appears in the background
/// only when its count reaches `threshold`.
pub fn visible_links(
    agg: &AggregateMatrix,
    threshold: u64,
    selected: &BTreeSet<usize>,
    armed: Option<usize>,
) -> Vec<Link> {
    let in_focus = |id: usize| selected.contains(&id) || armed == Some(id);
    let n = agg.size();
    let mut links = Vec::new();
    for src in 0..n {
        for dst in 0..n {
            let count = agg.get(src, dst);
            if src == dst || count == 0 {
                continue;
            }
            let class = if in_focus(src) || in_focus(dst) {
                LinkClass::Focus
            } else if count >= threshold {
                LinkClass::Background
            } else {
                continue;
            };
            links.push(Link {
                src,
                dst,
                count,
                class,
            });
        }
    }
    links
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PartnerFlow {
    pub id: usize,
    pub out: u64,
    #[serde(rename = "in")]
    pub inflow: u64,
}

/// Numerical summary of one building over a window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SummaryCard {
    pub building: usize,
    pub window: TimeWindow,
    pub out_total: u64,
    pub in_total: u64,
    /// `in_total - out_total`.
    pub net: i64,
    pub internal: u64,
    /// Partners with any exchange, by `out + in` descending, then id.
    pub partners: Vec<PartnerFlow>,
}

/// Panics if `building` is not a valid id.
pub fn building_summary(agg: &AggregateMatrix, building: usize) -> SummaryCard {
    assert!(building < agg.size(), "unknown building id {building}");
    let mut partners: Vec<PartnerFlow> = (0..agg.size())
        .filter(|&j| j != building)
        .map(|j| PartnerFlow {
            id: j,
            out: agg.get(building, j),
            inflow: agg.get(j, building),
        })
        .filter(|p| p.out + p.inflow > 0)
        .collect();
    partners.sort_by(|a, b| (b.out + b.inflow).cmp(&(a.out + a.inflow)).then(a.id.cmp(&b.id)));

    let out_total: u64 = partners.iter().map(|p| p.out).sum();
    let in_total: u64 = partners.iter().map(|p| p.inflow).sum();
    SummaryCard {
        building,
        window: agg.window,
        out_total,
        in_total,
        net: in_total as i64 - out_total as i64,
        internal: agg.get(building, building),
        partners,
    }
}
