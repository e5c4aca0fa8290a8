//! Pseudo-spectral evaluation of the quadratic terms: advection
//! `B̄₀χ`, the filtered form `B₀`, the transport term `B₁` and the
//! Korteweg force.
//!
//! Products are formed on the `n × n` grid from dealiased inputs and the
//! result is truncated to the 2/3 band again, which makes every quadratic
//! product exact on the retained modes.

use crate::error::Result;
use crate::models::{m_symbol, n_symbol, potential_f, potential_f_vec, ModelParams, OrderParam};
use crate::spectral::{
    apply_table, dealias, inner, leray_project, partial, Grid, SpectralField, SpectralScalar,
    SpectralVector,
};

/// Order-parameter field: one scalar per component.
pub type OrderField = Vec<SpectralScalar>;

/// `B̄₀χ(v, w) = P[(v·∇)w + χ Σ_j w_j ∇v_j]`.
pub fn b0_bar(grid: &Grid, v: &SpectralVector, w: &SpectralVector, chi: bool) -> Result<SpectralVector> {
    v.check_grid(grid)?;
    w.check_grid(grid)?;
    let v = dealias(grid, v);
    let w = dealias(grid, w);
    let len = grid.len();
    let vr = grid.inverse_vector(&v);
    let mut out = [vec![0.0; len], vec![0.0; len]];
    for (i, out_i) in out.iter_mut().enumerate() {
        let d1 = grid.inverse(&partial(grid, &w.components[i], 0));
        let d2 = grid.inverse(&partial(grid, &w.components[i], 1));
        for x in 0..len {
            out_i[x] += vr[0][x] * d1[x] + vr[1][x] * d2[x];
        }
    }
    if chi {
        let wr = grid.inverse_vector(&w);
        for j in 0..2 {
            let dv = [
                grid.inverse(&partial(grid, &v.components[j], 0)),
                grid.inverse(&partial(grid, &v.components[j], 1)),
            ];
            for (i, out_i) in out.iter_mut().enumerate() {
                for x in 0..len {
                    out_i[x] += wr[j][x] * dv[i][x];
                }
            }
        }
    }
    let f = grid.forward_vector([&out[0], &out[1]])?;
    Ok(leray_project(grid, &dealias(grid, &f)))
}

/// `b̄₀χ(a, b, c) = ⟨B̄₀χ(a, b), c⟩`.
pub fn trilinear_form(
    grid: &Grid,
    a: &SpectralVector,
    b: &SpectralVector,
    c: &SpectralVector,
    chi: bool,
) -> Result<f64> {
    c.check_grid(grid)?;
    Ok(inner(&b0_bar(grid, a, b, chi)?, c))
}

/// Nonlinear terms of one model on one grid, with the filter symbols
/// tabulated once.
#[derive(Clone, Debug)]
pub struct NonlinearWorkspace {
    grid: Grid,
    params: ModelParams,
    m: Vec<f64>,
    n: Vec<f64>,
}

impl NonlinearWorkspace {
    pub fn new(grid: &Grid, params: &ModelParams) -> Self {
        Self {
            grid: grid.clone(),
            params: params.clone(),
            m: m_symbol(params).tabulate(grid),
            n: n_symbol(params).tabulate(grid),
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    /// `B₀(u, u) = B̄₀χ(Mu, Nu)`.
    pub fn b0(&self, u: &SpectralVector) -> Result<SpectralVector> {
        u.check_grid(&self.grid)?;
        let mu = apply_table(u, &self.m);
        let nu = apply_table(u, &self.n);
        b0_bar(&self.grid, &mu, &nu, self.params.chi)
    }

    /// `B₁(u, φ) = Nu·∇φ`, componentwise for a director.
    pub fn b1(&self, u: &SpectralVector, phi: &OrderField) -> Result<OrderField> {
        u.check_grid(&self.grid)?;
        phi.check_grid(&self.grid)?;
        let g = &self.grid;
        let nu = g.inverse_vector(&dealias(g, &apply_table(u, &self.n)));
        phi.iter()
            .map(|c| {
                let c = dealias(g, c);
                let d1 = g.inverse(&partial(g, &c, 0));
                let d2 = g.inverse(&partial(g, &c, 1));
                let prod: Vec<f64> = (0..g.len())
                    .map(|x| nu[0][x] * d1[x] + nu[1][x] * d2[x])
                    .collect();
                Ok(dealias(g, &g.forward(&prod)?))
            })
            .collect()
    }

    /// Dealiased `f(φ)`, or `f(d) = ∇_d F(d)` for a director.
    pub fn potential_force(&self, phi: &OrderField) -> Result<OrderField> {
        phi.check_grid(&self.grid)?;
        let g = &self.grid;
        let p = &self.params;
        let samples: Vec<Vec<f64>> = phi.iter().map(|c| g.inverse(c)).collect();
        let mut out = vec![vec![0.0; g.len()]; phi.len()];
        match p.order_param {
            OrderParam::Vector(_) => {
                let mut d = vec![0.0; phi.len()];
                let mut f = vec![0.0; phi.len()];
                for x in 0..g.len() {
                    for (dc, s) in d.iter_mut().zip(&samples) {
                        *dc = s[x];
                    }
                    potential_f_vec(p, &d, &mut f);
                    for (o, fc) in out.iter_mut().zip(&f) {
                        o[x] = *fc;
                    }
                }
            }
            _ => {
                for (o, s) in out.iter_mut().zip(&samples) {
                    for (ox, sx) in o.iter_mut().zip(s) {
                        *ox = potential_f(p, *sx);
                    }
                }
            }
        }
        out.iter().map(|o| Ok(dealias(g, &g.forward(o)?))).collect()
    }

    /// `P[−ε Σ_c Δφ_c ∇φ_c]`.
    pub fn korteweg_convective_form(&self, phi: &OrderField) -> Result<SpectralVector> {
        phi.check_grid(&self.grid)?;
        let g = &self.grid;
        let len = g.len();
        let eps = self.params.epsilon;
        let mut out = [vec![0.0; len], vec![0.0; len]];
        for c in phi {
            let c = dealias(g, c);
            let lap = g.inverse(&crate::spectral::laplacian(g, &c));
            for (i, out_i) in out.iter_mut().enumerate() {
                let d = g.inverse(&partial(g, &c, i));
                for x in 0..len {
                    out_i[x] -= eps * lap[x] * d[x];
                }
            }
        }
        let f = g.forward_vector([&out[0], &out[1]])?;
        Ok(leray_project(g, &dealias(g, &f)))
    }

    /// `P[−ε div(Σ_c ∇φ_c ⊗ ∇φ_c)]`, built from the stress tensor.
    pub fn korteweg_stress_form(&self, phi: &OrderField) -> Result<SpectralVector> {
        phi.check_grid(&self.grid)?;
        let g = &self.grid;
        let len = g.len();
        let eps = self.params.epsilon;
        // t11, t12, t22
        let mut t = [vec![0.0; len], vec![0.0; len], vec![0.0; len]];
        for c in phi {
            let c = dealias(g, c);
            let d1 = g.inverse(&partial(g, &c, 0));
            let d2 = g.inverse(&partial(g, &c, 1));
            for x in 0..len {
                t[0][x] += d1[x] * d1[x];
                t[1][x] += d1[x] * d2[x];
                t[2][x] += d2[x] * d2[x];
            }
        }
        let th: Vec<SpectralScalar> = t
            .iter()
            .map(|s| Ok(dealias(g, &g.forward(s)?)))
            .collect::<Result<_>>()?;
        let mut f1 = partial(g, &th[0], 0);
        f1.add_scaled(&partial(g, &th[1], 1), 1.0);
        let mut f2 = partial(g, &th[1], 0);
        f2.add_scaled(&partial(g, &th[2], 1), 1.0);
        let f = SpectralVector::new(f1.scaled(-eps), f2.scaled(-eps));
        Ok(leray_project(g, &f))
    }
}
