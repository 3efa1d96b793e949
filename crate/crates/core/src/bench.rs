//! Timing and allocation comparison of the three ways to get p(n).

use std::alloc::{GlobalAlloc, Layout, System};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::time::Instant;

use num_bigint::BigUint;
use serde::Serialize;

use crate::config::Limits;
use crate::error::Result;
use crate::numeric::fractal_p_capped;
use crate::oracle::{build_table_capped, build_table_pentagonal_capped};

static CURRENT: AtomicUsize = AtomicUsize::new(0);
static PEAK: AtomicUsize = AtomicUsize::new(0);
static INSTALLED: AtomicBool = AtomicBool::new(false);

/// Counting wrapper around the system allocator. Install it with
/// `#[global_allocator]` in a binary to get peak-allocation columns.
pub struct TrackingAllocator;

unsafe impl GlobalAlloc for TrackingAllocator {
    unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
        let ptr = unsafe { System.alloc(layout) };
        if !ptr.is_null() {
            INSTALLED.store(true, Ordering::Relaxed);
            let now = CURRENT.fetch_add(layout.size(), Ordering::Relaxed) + layout.size();
            PEAK.fetch_max(now, Ordering::Relaxed);
        }
        ptr
    }

    unsafe fn dealloc(&self, ptr: *mut u8, layout: Layout) {
        unsafe { System.dealloc(ptr, layout) };
        CURRENT.fetch_sub(layout.size(), Ordering::Relaxed);
    }
}

fn reset_peak() -> usize {
    let now = CURRENT.load(Ordering::Relaxed);
    PEAK.store(now, Ordering::Relaxed);
    now
}

fn peak_above(baseline: usize) -> Option<usize> {
    INSTALLED
        .load(Ordering::Relaxed)
        .then(|| PEAK.load(Ordering::Relaxed).saturating_sub(baseline))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    PartsDp,
    Pentagonal,
    Fractal,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::PartsDp => "parts-dp",
            Method::Pentagonal => "pentagonal",
            Method::Fractal => "fractal",
        }
    }

    fn run(self, n: usize, limits: &Limits) -> Result<BigUint> {
        Ok(match self {
            Method::PartsDp => build_table_capped(n, limits.max_table)?[n].clone(),
            Method::Pentagonal => build_table_pentagonal_capped(n, limits.max_table)?[n].clone(),
            Method::Fractal => fractal_p_capped(n, limits.max_fractal)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub method: Method,
    pub n: usize,
    pub seconds: f64,
    /// Bytes allocated above the starting level, if the tracking allocator
    /// is installed.
    pub peak_bytes: Option<usize>,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchTable {
    pub rows: Vec<BenchRow>,
    /// n values where the methods returned different p(n).
    pub disagreements: Vec<usize>,
}

impl BenchTable {
    pub fn render(&self) -> String {
        let mut out = format!(
            "{:<12} {:>7} {:>12} {:>14}  {}\n",
            "method", "n", "seconds", "peak_bytes", "digits"
        );
        for row in &self.rows {
            let peak = row.peak_bytes.map_or("n/a".to_string(), |b| b.to_string());
            out.push_str(&format!(
                "{:<12} {:>7} {:>12.6} {:>14}  {}\n",
                row.method.name(),
                row.n,
                row.seconds,
                peak,
                row.value.len()
            ));
        }
        out
    }
}

/// Runs every method on every n. The fractal evaluator can be left out for
/// sizes beyond its comfort zone.
pub fn bench(ns: &[usize], include_fractal: bool, limits: &Limits) -> Result<BenchTable> {
    let mut methods = vec![Method::PartsDp, Method::Pentagonal];
    if include_fractal {
        methods.push(Method::Fractal);
    }
    // Reject oversized requests before spending time on the others.
    for &n in ns {
        Limits::check("table size", n, limits.max_table)?;
        if include_fractal {
            Limits::check("fractal n", n, limits.max_fractal)?;
        }
    }
    let mut rows = Vec::new();
    let mut disagreements = Vec::new();
    for &n in ns {
        let mut first: Option<BigUint> = None;
        let mut agree = true;
        for &method in &methods {
            let baseline = reset_peak();
            let start = Instant::now();
            let value = method.run(n, limits)?;
            let seconds = start.elapsed().as_secs_f64();
            let peak_bytes = peak_above(baseline);
            match &first {
                None => first = Some(value.clone()),
                Some(v) => agree &= *v == value,
            }
            rows.push(BenchRow {
                method,
                n,
                seconds,
                peak_bytes,
                value: value.to_string(),
            });
        }
        if !agree {
            disagreements.push(n);
        }
    }
    Ok(BenchTable {
        rows,
        disagreements,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn methods_agree() {
        let table = bench(&[100, 300], true, &Limits::default()).unwrap();
        assert_eq!(table.rows.len(), 6);
        assert!(table.disagreements.is_empty());
        assert!(table.rows.iter().all(|r| r.peak_bytes.is_none()));
    }

    #[test]
    fn empty_list_is_header_only() {
        let table = bench(&[], true, &Limits::default()).unwrap();
        assert_eq!(table.render().lines().count(), 1);
    }

    #[test]
    fn fractal_can_be_excluded() {
        let limits = Limits {
            max_fractal: 10,
            ..Limits::default()
        };
        assert!(bench(&[50], true, &limits).is_err());
        let table = bench(&[50], false, &limits).unwrap();
        assert!(table.rows.iter().all(|r| r.method != Method::Fractal));
    }
}
