use crate::error::{ensure_dims, precondition, Error, Result};
use crate::linalg::{Matrix, Subspace};

use super::module::{subs_contains, subs_dims, SubTuple};
use super::LambdaModule;

/// A window module with a flag `0 = M⁰ ⊆ M¹ ⊆ … ⊆ M^s = M` of submodules.
///
/// `steps[k]` holds `M^{k+1}` degreewise; the last step is the whole module.
#[derive(Clone, Debug, PartialEq)]
pub struct FilteredLambdaModule {
    module: LambdaModule,
    steps: Vec<SubTuple>,
}

/// A basis of each degree adapted to the flag: the first vectors span `M¹`,
/// the next ones complete it to `M²`, and so on.
#[derive(Clone, Debug)]
pub struct AdaptedBasis {
    /// Per degree, the adapted basis vectors as matrix columns.
    pub change: Vec<Matrix>,
    /// Per degree, the flag level (1-based) of each adapted basis vector.
    pub levels: Vec<Vec<u32>>,
}

impl FilteredLambdaModule {
    pub fn new(module: LambdaModule, steps: Vec<SubTuple>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::Schema("a flag needs at least one step".into()));
        }
        for s in &steps {
            ensure_dims!(s.len() == module.dims().len(), "flag step with {} degrees", s.len());
            for (sub, &n) in s.iter().zip(module.dims()) {
                ensure_dims!(sub.ambient() == n, "flag step subspace of wrong ambient dimension");
            }
            precondition!(module.is_closed(s)?, "flag step is not a λ-submodule");
        }
        for w in steps.windows(2) {
            precondition!(subs_contains(&w[1], &w[0])?, "flag steps are not nested");
        }
        precondition!(
            steps.last().expect("nonempty").iter().all(Subspace::is_full),
            "last flag step must be the whole module"
        );
        Ok(FilteredLambdaModule { module, steps })
    }

    pub fn trivial(module: LambdaModule) -> Self {
        let full = module.full_subs();
        FilteredLambdaModule { module, steps: vec![full] }
    }

    pub fn module(&self) -> &LambdaModule {
        &self.module
    }

    pub fn steps(&self) -> &[SubTuple] {
        &self.steps
    }

    /// Number of steps `s`.
    pub fn length(&self) -> usize {
        self.steps.len()
    }

    pub fn step_dims(&self, k: usize) -> Vec<usize> {
        subs_dims(&self.steps[k])
    }

    pub fn adapted_basis(&self) -> AdaptedBasis {
        let f = self.module.field();
        let mut change = Vec::new();
        let mut levels = Vec::new();
        for (d, &n) in self.module.dims().iter().enumerate() {
            let mut cols = Vec::new();
            let mut lv = Vec::new();
            let mut prev = Subspace::zero(f, n);
            for (k, step) in self.steps.iter().enumerate() {
                let extra = step[d].quotient_basis(&prev).expect("nested flag");
                lv.extend(std::iter::repeat((k + 1) as u32).take(extra.len()));
                cols.extend(extra);
                prev = step[d].clone();
            }
            change.push(Matrix::from_cols(f, n, cols).expect("adapted columns"));
            levels.push(lv);
        }
        AdaptedBasis { change, levels }
    }

    /// The module rewritten in the adapted basis, where every flag step is a
    /// coordinate subspace, together with the level of each coordinate.
    pub fn adapted_module(&self) -> Result<(LambdaModule, Vec<Vec<u32>>)> {
        let ab = self.adapted_basis();
        let inv = ab.change.iter().map(Matrix::inverse).collect::<Result<Vec<_>>>()?;
        Ok((self.module.gauge(&inv)?, ab.levels))
    }

    /// The associated graded pieces `M^k / M^{k-1}`.
    pub fn gr(&self) -> Result<Vec<LambdaModule>> {
        let mut out = Vec::new();
        for k in 0..self.steps.len() {
            let sub = self.module.submodule(&self.steps[k])?;
            let prev: SubTuple = if k == 0 {
                sub.module.zero_subs()
            } else {
                self.steps[k - 1]
                    .iter()
                    .zip(&self.steps[k])
                    .map(|(small, big)| {
                        let coords = small.basis().iter().map(|v| big.coordinates(v).expect("nested")).collect();
                        Subspace::span(self.module.field(), big.dim(), coords)
                    })
                    .collect::<Result<_>>()?
            };
            out.push(sub.module.quotient(&prev)?.module);
        }
        Ok(out)
    }

    /// Restriction of module and flag to degrees `≥ new_p`.
    pub fn truncate_below(&self, new_p: i64) -> Result<FilteredLambdaModule> {
        let module = self.module.truncate_below(new_p)?;
        let shift = (new_p - self.module.p()) as usize;
        let steps = self.steps.iter().map(|s| s[shift..].to_vec()).collect();
        FilteredLambdaModule::new(module, steps)
    }

    pub fn truncate_above(&self, new_q: i64) -> Result<FilteredLambdaModule> {
        let module = self.module.truncate_above(new_q)?;
        let keep = module.dims().len();
        let steps = self.steps.iter().map(|s| s[..keep].to_vec()).collect();
        FilteredLambdaModule::new(module, steps)
    }

    /// Transports module and flag along a graded automorphism.
    pub fn gauge(&self, g: &[Matrix]) -> Result<FilteredLambdaModule> {
        let module = self.module.gauge(g)?;
        let steps = self
            .steps
            .iter()
            .map(|s| s.iter().zip(g).map(|(sub, m)| sub.image_under(m)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        FilteredLambdaModule::new(module, steps)
    }

    /// Every step is generated by its bottom-degree part.
    pub fn is_strongly_finitely_generated(&self) -> bool {
        self.steps.iter().all(|s| {
            let mut seeds = self.module.zero_subs();
            seeds[0] = s[0].clone();
            self.module.closure(&seeds).map(|c| c == *s).unwrap_or(false)
        })
    }
}
