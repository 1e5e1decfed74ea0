//! Finite-difference reference solver for the perforated disc.
//!
//! A uniform lattice over `[-1, 1]^2` is split into exterior nodes (outside
//! the disc), hole nodes (inside a hole, Dirichlet) and interior unknowns.
//! The operator is the masked five-point graph Laplacian: a link to an
//! exterior node is dropped, which imposes zero flux on the staircase outer
//! boundary and keeps the matrix symmetric, so Jacobi-preconditioned CG
//! applies. All routines are `f64` and serial, hence bit-reproducible.

use crate::error::{Error, Result};
use crate::field_io::{lattice_coord, FieldGrid, FieldMetadata};
use crate::geometry::Point2;
use crate::scene::Scene;

pub const DEFAULT_CG_TOL: f64 = 1e-10;
pub const DEFAULT_CG_MAX_ITER: usize = 100_000;
/// Smallest link fraction kept by the ghost-fluid hole boundary.
const MIN_LINK_FRACTION: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeClass {
    Exterior,
    Hole(usize),
    Interior,
}

/// Treatment of links from an interior node into a hole.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HoleBoundary {
    /// The hole value is imposed at the hole node itself.
    Staircase,
    /// The hole value is imposed where the link crosses the hole circle
    /// (symmetric ghost-fluid weights; only the diagonal and right-hand side
    /// change).
    #[default]
    GhostFluid,
}

/// Classified lattice plus the sparse operator pattern.
#[derive(Debug, Clone)]
pub struct MaskedGrid {
    pub h: f64,
    /// Nodes per side (`n + 1` for `n` cells).
    pub n_side: usize,
    pub classes: Vec<NodeClass>,
    pub boundary: HoleBoundary,
    /// Lattice index of each unknown.
    unknowns: Vec<usize>,
    /// Unknown index of each lattice node (`usize::MAX` if none).
    unknown_of: Vec<usize>,
    /// Interior neighbours (unknown indices) of each unknown.
    links: Vec<Vec<usize>>,
    /// `(hole index, weight)` for each link of an unknown into a hole.
    hole_links: Vec<Vec<(usize, f64)>>,
}

impl MaskedGrid {
    pub fn coord(&self, i: usize) -> f64 {
        lattice_coord([-1.0, 1.0], self.n_side, i)
    }

    pub fn node(&self, k: usize) -> Point2<f64> {
        Point2::new(self.coord(k % self.n_side), self.coord(k / self.n_side))
    }

    pub fn n_unknowns(&self) -> usize {
        self.unknowns.len()
    }

    pub fn count(&self, class: NodeClass) -> usize {
        self.classes.iter().filter(|&&c| c == class).count()
    }

    fn neighbours(&self, k: usize) -> impl Iterator<Item = usize> + '_ {
        let n = self.n_side;
        let (i, j) = (k % n, k / n);
        [
            (i > 0).then(|| k - 1),
            (i + 1 < n).then(|| k + 1),
            (j > 0).then(|| k - n),
            (j + 1 < n).then(|| k + n),
        ]
        .into_iter()
        .flatten()
    }
}

pub fn build_grid(scene: &Scene<f64>, h: f64) -> Result<MaskedGrid> {
    build_grid_with(scene, h, HoleBoundary::default())
}

pub fn build_grid_with(scene: &Scene<f64>, h: f64, boundary: HoleBoundary) -> Result<MaskedGrid> {
    if !(h > 0.0 && h <= 0.5) {
        return Err(Error::NonpositiveParameter { name: "h", value: h });
    }
    let eps = scene.epsilon();
    if h > eps / 3.0 {
        return Err(Error::HoleUnresolved { h, epsilon: eps });
    }
    let cells = (2.0 / h).round() as usize;
    let n_side = cells + 1;
    let mut grid = MaskedGrid {
        h: 2.0 / cells as f64,
        n_side,
        classes: Vec::with_capacity(n_side * n_side),
        boundary,
        unknowns: Vec::new(),
        unknown_of: vec![usize::MAX; n_side * n_side],
        links: Vec::new(),
        hole_links: Vec::new(),
    };
    for k in 0..n_side * n_side {
        let x = grid.node(k);
        let class = if x.norm() > 1.0 {
            NodeClass::Exterior
        } else if let Some(j) = scene
            .holes()
            .iter()
            .position(|hole| x.distance(hole.center) <= eps * hole.radius_scale)
        {
            NodeClass::Hole(j)
        } else {
            NodeClass::Interior
        };
        grid.classes.push(class);
    }
    // interior nodes with no usable neighbour carry no equation
    for k in 0..grid.classes.len() {
        if grid.classes[k] == NodeClass::Interior
            && grid.neighbours(k).all(|m| grid.classes[m] == NodeClass::Exterior)
        {
            grid.classes[k] = NodeClass::Exterior;
        }
    }
    for k in 0..grid.classes.len() {
        if grid.classes[k] == NodeClass::Interior {
            grid.unknown_of[k] = grid.unknowns.len();
            grid.unknowns.push(k);
        }
    }
    for u in 0..grid.unknowns.len() {
        let k = grid.unknowns[u];
        let x = grid.node(k);
        let mut links = Vec::with_capacity(4);
        let mut holes = Vec::new();
        for m in grid.neighbours(k) {
            match grid.classes[m] {
                NodeClass::Interior => links.push(grid.unknown_of[m]),
                NodeClass::Hole(j) => {
                    let w = match boundary {
                        HoleBoundary::Staircase => 1.0,
                        HoleBoundary::GhostFluid => {
                            let hole = &scene.holes()[j];
                            let theta = link_fraction(x, grid.node(m), hole.center, eps * hole.radius_scale);
                            1.0 / theta.max(MIN_LINK_FRACTION)
                        }
                    };
                    holes.push((j, w));
                }
                NodeClass::Exterior => {}
            }
        }
        grid.links.push(links);
        grid.hole_links.push(holes);
    }
    Ok(grid)
}

/// Fraction `t` of the segment `a -> b` at which it first meets the circle
/// `|p - c| = r`, given `a` outside and `b` inside.
fn link_fraction(a: Point2<f64>, b: Point2<f64>, c: Point2<f64>, r: f64) -> f64 {
    let d = b - a;
    let f = a - c;
    let qa = d.norm_sq();
    let qb = 2.0 * f.dot(d);
    let qc = f.norm_sq() - r * r;
    let disc = (qb * qb - 4.0 * qa * qc).max(0.0);
    // smaller root; written to avoid cancellation
    let t = (2.0 * qc) / (-qb + disc.sqrt());
    t.clamp(0.0, 1.0)
}

/// Interior values of a lattice solve, with NaN elsewhere.
#[derive(Debug, Clone)]
pub struct OracleField {
    pub values: Vec<f64>,
    pub s: f64,
    pub residual_norm: f64,
    pub iterations: usize,
}

/// Controls for the conjugate-gradient solves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CgOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for CgOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_CG_TOL,
            max_iter: DEFAULT_CG_MAX_ITER,
        }
    }
}

/// `(D/h^2)(graph Laplacian) + s` on the unknowns.
struct Operator<'a> {
    grid: &'a MaskedGrid,
    scale: f64,
    diag: Vec<f64>,
}

impl<'a> Operator<'a> {
    fn new(grid: &'a MaskedGrid, d: f64, s: f64) -> Self {
        let scale = d / (grid.h * grid.h);
        let diag = (0..grid.n_unknowns())
            .map(|u| {
                let w: f64 = grid.links[u].len() as f64 + grid.hole_links[u].iter().map(|l| l.1).sum::<f64>();
                scale * w + s
            })
            .collect();
        Self { grid, scale, diag }
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for u in 0..x.len() {
            let off: f64 = self.grid.links[u].iter().map(|&v| x[v]).sum();
            y[u] = self.diag[u] * x[u] - self.scale * off;
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Jacobi-preconditioned conjugate gradients from a zero start.
fn pcg(op: &Operator, b: &[f64], opts: CgOptions) -> Result<(Vec<f64>, f64, usize)> {
    let n = b.len();
    let b_norm = dot(b, b).sqrt();
    let mut x = vec![0.0; n];
    if b_norm == 0.0 {
        return Ok((x, 0.0, 0));
    }
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&op.diag).map(|(r, d)| r / d).collect();
    let mut p = z.clone();
    let mut ap = vec![0.0; n];
    let mut rz = dot(&r, &z);
    for it in 0..opts.max_iter {
        let rel = dot(&r, &r).sqrt() / b_norm;
        if rel <= opts.tol {
            return Ok((x, rel, it));
        }
        op.apply(&p, &mut ap);
        let alpha = rz / dot(&p, &ap);
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        for i in 0..n {
            z[i] = r[i] / op.diag[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    let rel = dot(&r, &r).sqrt() / b_norm;
    if rel <= opts.tol {
        return Ok((x, rel, opts.max_iter));
    }
    Err(Error::CgNotConverged {
        iterations: opts.max_iter,
        residual: rel,
    })
}

/// Interior node nearest to `x`.
fn nearest_unknown(grid: &MaskedGrid, x: Point2<f64>) -> Result<usize> {
    (0..grid.n_unknowns())
        .min_by(|&a, &b| {
            let da = grid.node(grid.unknowns[a]).distance(x);
            let db = grid.node(grid.unknowns[b]).distance(x);
            da.partial_cmp(&db).unwrap()
        })
        .ok_or_else(|| Error::InvalidSource {
            reason: "grid has no interior nodes".into(),
        })
}

fn scatter(grid: &MaskedGrid, sol: &[f64]) -> Vec<f64> {
    let mut values = vec![f64::NAN; grid.classes.len()];
    for (u, &k) in grid.unknowns.iter().enumerate() {
        values[k] = sol[u];
    }
    values
}

fn hole_rhs(grid: &MaskedGrid, op_scale: f64, hole_value: impl Fn(usize) -> f64) -> Vec<f64> {
    grid.hole_links
        .iter()
        .map(|links| links.iter().map(|&(j, w)| op_scale * w * hole_value(j)).sum())
        .collect()
}

/// Lattice solution of `D Δu - s u = -Γ0 δ(x - x0)` with `u = Φ_j / s` on
/// hole `j` (`s > 0`), or of `D Δu = 0` with `u = Φ_j` (`s = 0`).
pub fn solve_modified_helmholtz_fd(grid: &MaskedGrid, scene: &Scene<f64>, s: f64) -> Result<OracleField> {
    solve_modified_helmholtz_fd_with(grid, scene, s, CgOptions::default())
}

pub fn solve_modified_helmholtz_fd_with(
    grid: &MaskedGrid,
    scene: &Scene<f64>,
    s: f64,
    opts: CgOptions,
) -> Result<OracleField> {
    if !(s >= 0.0 && s.is_finite()) {
        return Err(Error::NonpositiveParameter { name: "s", value: s });
    }
    let op = Operator::new(grid, scene.diffusivity(), s);
    let holes = scene.holes();
    let mut b = if s > 0.0 {
        hole_rhs(grid, op.scale, |j| holes[j].phi / s)
    } else {
        hole_rhs(grid, op.scale, |j| holes[j].phi)
    };
    if s > 0.0 && scene.gamma0() != 0.0 {
        let u = nearest_unknown(grid, scene.x0())?;
        b[u] += scene.gamma0() / (grid.h * grid.h);
    }
    let (sol, residual_norm, iterations) = pcg(&op, &b, opts)?;
    Ok(OracleField {
        values: scatter(grid, &sol),
        s,
        residual_norm,
        iterations,
    })
}

impl OracleField {
    pub fn to_field_grid(&self, grid: &MaskedGrid, metadata: FieldMetadata) -> FieldGrid {
        let mut f = FieldGrid::new(grid.n_side, grid.n_side, metadata);
        f.values = self.values.clone();
        f
    }
}

/// Lattice accumulation time.
///
/// At each `s`, `T(s) = (u* - s u~)/(s u*)` is obtained as `w / u*` where `w`
/// solves `(D/h^2) L w + s w = u* - Γ0 δ` with `w = 0` on holes; on the
/// lattice this is the same quantity, but without the cancellation in
/// `u* - s u~`. `T(s)` at `s_base` and `s_base/2` is Richardson-extrapolated.
pub fn acc_time_fd(scene: &Scene<f64>, h: f64, s_base: f64) -> Result<FieldGrid> {
    let grid = build_grid(scene, h)?;
    acc_time_fd_on(&grid, scene, s_base)
}

pub fn acc_time_fd_on(grid: &MaskedGrid, scene: &Scene<f64>, s_base: f64) -> Result<FieldGrid> {
    if !(s_base > 0.0) {
        return Err(Error::NonpositiveParameter {
            name: "s_base",
            value: s_base,
        });
    }
    let opts = CgOptions {
        tol: 1e-12,
        ..CgOptions::default()
    };
    let steady = solve_modified_helmholtz_fd_with(grid, scene, 0.0, opts)?;
    let u_star: Vec<f64> = grid.unknowns.iter().map(|&k| steady.values[k]).collect();
    let mut rhs = u_star.clone();
    if scene.gamma0() != 0.0 {
        let u = nearest_unknown(grid, scene.x0())?;
        rhs[u] -= scene.gamma0() / (grid.h * grid.h);
    }
    let moment = |s: f64| -> Result<Vec<f64>> {
        let op = Operator::new(grid, scene.diffusivity(), s);
        let (w, _, _) = pcg(&op, &rhs, opts)?;
        Ok(w.iter().zip(&u_star).map(|(w, u)| w / u).collect())
    };
    let coarse = moment(s_base)?;
    let fine = moment(0.5 * s_base)?;
    let t: Vec<f64> = fine.iter().zip(&coarse).map(|(f, c)| 2.0 * f - c).collect();
    let metadata = FieldMetadata::new(scene.fingerprint(), "acc_time_fd")
        .with_param("h", grid.h)
        .with_param("s_base", s_base);
    let mut field = FieldGrid::new(grid.n_side, grid.n_side, metadata);
    field.values = scatter(grid, &t);
    Ok(field)
}

/// Lattice steady state as a field.
pub fn steady_state_fd(scene: &Scene<f64>, h: f64) -> Result<FieldGrid> {
    let grid = build_grid(scene, h)?;
    let sol = solve_modified_helmholtz_fd(&grid, scene, 0.0)?;
    let metadata = FieldMetadata::new(scene.fingerprint(), "steady_state_fd").with_param("h", grid.h);
    Ok(sol.to_field_grid(&grid, metadata))
}
