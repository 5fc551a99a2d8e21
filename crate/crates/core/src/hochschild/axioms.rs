use serde::Serialize;

use super::dgla::add;
use super::{Cochain, HochschildDgla};

/// Outcome of checking the dgla identities on every basis element, pair or triple.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub d_squared: bool,
    pub antisymmetry: bool,
    pub jacobi: bool,
    pub leibniz: bool,
    /// `None` for the unfiltered dgla.
    pub filtered_closure: Option<bool>,
    pub checked_triples: usize,
}

impl AxiomReport {
    pub fn all_hold(&self) -> bool {
        self.d_squared && self.antisymmetry && self.jacobi && self.leibniz && self.filtered_closure.unwrap_or(true)
    }
}

fn sign(l: &HochschildDgla, odd: bool) -> crate::Scalar {
    if odd {
        -l.field().one()
    } else {
        l.field().one()
    }
}

fn diff(l: &HochschildDgla, x: &Cochain, y: &Cochain) -> Cochain {
    add(x, y, &-l.field().one())
}

/// Checks `d² = 0`, graded antisymmetry, the graded Jacobi identity
/// `[x,[y,z]] = [[x,y],z] + (−1)^{|x||y|}[y,[x,z]]` and the Leibniz rule
/// `d[x,y] = [dx,y] + (−1)^{|x|}[x,dy]` on the (filtered) basis, using the
/// dgla's own differential. For the filtered variant also checks that `d` and
/// the bracket of flag-preserving basis cochains are flag-preserving.
pub fn check_axioms(l: &HochschildDgla) -> AxiomReport {
    let top = l.top();
    let bases: Vec<Vec<Cochain>> =
        (0..=top).map(|n| l.basis(n).into_iter().map(|j| l.basis_cochain(n, j)).collect()).collect();
    let ds: Vec<Vec<Cochain>> = bases.iter().map(|b| b.iter().map(|x| l.d(x)).collect()).collect();
    let mut r = AxiomReport { d_squared: true, antisymmetry: true, jacobi: true, leibniz: true, ..Default::default() };
    let mut closed = true;

    for dn in &ds {
        for dx in dn {
            closed &= l.contains(dx);
            r.d_squared &= l.d(dx).is_zero();
        }
    }

    for m in 0..=top {
        for n in 0..=top - m {
            for (i, x) in bases[m].iter().enumerate() {
                for (j, y) in bases[n].iter().enumerate() {
                    let xy = l.bracket(x, y);
                    closed &= l.contains(&xy);
                    let yx = l.bracket(y, x);
                    r.antisymmetry &= add(&xy, &yx, &sign(l, (m * n) % 2 == 1)).is_zero();
                    let lhs = l.d(&xy);
                    let rhs = add(&l.bracket(&ds[m][i], y), &l.bracket(x, &ds[n][j]), &sign(l, m % 2 == 1));
                    r.leibniz &= diff(l, &lhs, &rhs).is_zero();
                }
            }
        }
    }

    for m in 0..=top {
        for n in 0..=top - m {
            for k in 0..=top - m - n {
                for x in &bases[m] {
                    for y in &bases[n] {
                        let xy = l.bracket(x, y);
                        for z in &bases[k] {
                            r.checked_triples += 1;
                            let lhs = l.bracket(x, &l.bracket(y, z));
                            let a = l.bracket(&xy, z);
                            let b = l.bracket(y, &l.bracket(x, z));
                            let rhs = add(&a, &b, &sign(l, (m * n) % 2 == 1));
                            if lhs != rhs {
                                r.jacobi = false;
                            }
                        }
                    }
                }
            }
        }
    }

    r.filtered_closure = l.is_filtered().then_some(closed);
    r
}
