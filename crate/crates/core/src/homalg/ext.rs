use serde::Serialize;

use crate::error::Result;
use crate::graded::{FilteredLambdaModule, LambdaModule};

use super::{filtered_hom_complex, HomFlavor};

/// Which computation produced an [`ExtTable`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtRoute {
    FilteredBar,
    GradedBar,
    HochschildTwisted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtTable {
    pub route: ExtRoute,
    pub window: (i64, i64),
    pub dims: Vec<usize>,
}

/// `Ext^n_{A-gr,−}(M, N)` for `n ≤ n_max`, from the filtered bar complex.
pub fn filtered_ext_dims(m: &FilteredLambdaModule, n: &FilteredLambdaModule, n_max: usize) -> Result<ExtTable> {
    let c = filtered_hom_complex(m, n, HomFlavor::Filtered, n_max)?;
    Ok(ExtTable { route: ExtRoute::FilteredBar, window: (m.module().p(), m.module().q()), dims: c.cohomology_dims() })
}

/// `Ext^n_{A-gr}(M, N)` for `n ≤ n_max`, ignoring flags.
pub fn graded_ext_dims(m: &LambdaModule, n: &LambdaModule, n_max: usize) -> Result<ExtTable> {
    let fm = FilteredLambdaModule::trivial(m.clone());
    let fn_ = FilteredLambdaModule::trivial(n.clone());
    let c = filtered_hom_complex(&fm, &fn_, HomFlavor::Graded, n_max)?;
    Ok(ExtTable { route: ExtRoute::GradedBar, window: (m.p(), m.q()), dims: c.cohomology_dims() })
}

/// The `E_1` table `E_1^{p, n-p} = ⊕_l Ext^n(gr_l M, gr_{l-p} N)`, assembled
/// from graded Ext of the associated graded pieces. Indexed `[p][n]`.
pub fn e1_via_graded_ext(m: &FilteredLambdaModule, n: &FilteredLambdaModule, n_max: usize) -> Result<Vec<Vec<usize>>> {
    let grm = m.gr()?;
    let grn = n.gr()?;
    let t = grm.len().max(1);
    let mut table = vec![vec![0usize; n_max + 1]; t];
    for (l, gm) in grm.iter().enumerate() {
        for (l2, gn) in grn.iter().enumerate() {
            if l2 > l {
                continue;
            }
            let p = l - l2;
            if gm.total_dim() == 0 || gn.total_dim() == 0 {
                continue;
            }
            let e = graded_ext_dims(gm, gn, n_max)?;
            for (k, d) in e.dims.iter().enumerate() {
                table[p][k] += d;
            }
        }
    }
    Ok(table)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WindowExt {
    pub window: (i64, i64),
    pub dims: Vec<usize>,
    /// Whether the dims equal those of the largest window in the list.
    pub agrees_with_largest: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TruncationReport {
    pub rows: Vec<WindowExt>,
    /// Per cohomological degree, the smallest `q` from which all larger tested
    /// windows agree.
    pub stabilized_from: Vec<Option<i64>>,
}

/// Filtered Ext dims of the truncations to `[p, q]` for each `q` in `q_list`,
/// for modules given on a window containing all of them.
pub fn truncation_stability(
    m: &FilteredLambdaModule,
    n: &FilteredLambdaModule,
    p: i64,
    q_list: &[i64],
    n_max: usize,
) -> Result<TruncationReport> {
    let mut qs = q_list.to_vec();
    qs.sort_unstable();
    let mut rows = Vec::new();
    for &q in &qs {
        let mt = m.truncate_below(p)?.truncate_above(q)?;
        let nt = n.truncate_below(p)?.truncate_above(q)?;
        let e = filtered_ext_dims(&mt, &nt, n_max)?;
        rows.push(WindowExt { window: (p, q), dims: e.dims, agrees_with_largest: false });
    }
    let last = rows.last().map(|r| r.dims.clone()).unwrap_or_default();
    for r in &mut rows {
        r.agrees_with_largest = r.dims == last;
    }
    let stabilized_from = (0..=n_max)
        .map(|k| {
            let mut from = None;
            for r in rows.iter().rev() {
                if r.dims.get(k) == last.get(k) {
                    from = Some(r.window.1);
                } else {
                    break;
                }
            }
            from
        })
        .collect();
    Ok(TruncationReport { rows, stabilized_from })
}
