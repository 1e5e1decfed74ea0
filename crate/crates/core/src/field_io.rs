//! Scalar fields sampled on a rectangular lattice, their CSV form, grid
//! sweeps of the asymptotic evaluators, and field-to-field error reports.
//!
//! CSV layout: a first line `# {json header}`, then `x,y,value` rows with
//! `x` varying fastest. Masked nodes hold NaN and are written as `nan`.

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{AccTimeOrder1, NonperturbativeAccTime, SteadyState, DEFAULT_S_BASE};
use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::scene::Scene;
use crate::spectral::TruncatedAccTime;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Provenance carried by every field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldMetadata {
    pub scene_hash: String,
    pub field: String,
    #[serde(default)]
    pub params: BTreeMap<String, serde_json::Value>,
    pub version: String,
}

impl FieldMetadata {
    pub fn new(scene_hash: impl Into<String>, field: impl Into<String>) -> Self {
        Self {
            scene_hash: scene_hash.into(),
            field: field.into(),
            params: BTreeMap::new(),
            version: VERSION.to_string(),
        }
    }

    pub fn with_param(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Header {
    nx: usize,
    ny: usize,
    x_range: [f64; 2],
    y_range: [f64; 2],
    #[serde(flatten)]
    metadata: FieldMetadata,
}

/// Node values on an `nx` x `ny` lattice including the extent endpoints,
/// stored row-major (`values[iy * nx + ix]`).
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid {
    pub nx: usize,
    pub ny: usize,
    pub x_range: [f64; 2],
    pub y_range: [f64; 2],
    pub values: Vec<f64>,
    pub metadata: FieldMetadata,
}

/// Lattice coordinate `lo + i (hi - lo) / (n - 1)`; shared by every producer
/// so independently built grids land on identical nodes.
pub fn lattice_coord(range: [f64; 2], n: usize, i: usize) -> f64 {
    if n < 2 {
        return range[0];
    }
    range[0] + (range[1] - range[0]) * i as f64 / (n - 1) as f64
}

impl FieldGrid {
    /// All-NaN field over `[-1, 1]^2`.
    pub fn new(nx: usize, ny: usize, metadata: FieldMetadata) -> Self {
        Self::with_extent(nx, ny, [-1.0, 1.0], [-1.0, 1.0], metadata)
    }

    pub fn with_extent(nx: usize, ny: usize, x_range: [f64; 2], y_range: [f64; 2], metadata: FieldMetadata) -> Self {
        Self {
            nx,
            ny,
            x_range,
            y_range,
            values: vec![f64::NAN; nx * ny],
            metadata,
        }
    }

    pub fn x(&self, ix: usize) -> f64 {
        lattice_coord(self.x_range, self.nx, ix)
    }

    pub fn y(&self, iy: usize) -> f64 {
        lattice_coord(self.y_range, self.ny, iy)
    }

    pub fn node(&self, ix: usize, iy: usize) -> Point2<f64> {
        Point2::new(self.x(ix), self.y(iy))
    }

    pub fn get(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.nx + ix]
    }

    pub fn set(&mut self, ix: usize, iy: usize, v: f64) {
        self.values[iy * self.nx + ix] = v;
    }

    /// `(node, value)` for every unmasked node.
    pub fn finite_nodes(&self) -> impl Iterator<Item = (Point2<f64>, f64)> + '_ {
        (0..self.ny)
            .flat_map(move |iy| (0..self.nx).map(move |ix| (ix, iy)))
            .filter_map(move |(ix, iy)| {
                let v = self.get(ix, iy);
                v.is_finite().then(|| (self.node(ix, iy), v))
            })
    }

    pub fn masked_count(&self) -> usize {
        self.values.iter().filter(|v| v.is_nan()).count()
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let header = Header {
            nx: self.nx,
            ny: self.ny,
            x_range: self.x_range,
            y_range: self.y_range,
            metadata: self.metadata.clone(),
        };
        writeln!(w, "# {}", serde_json::to_string(&header)?)?;
        writeln!(w, "x,y,value")?;
        for iy in 0..self.ny {
            let y = self.y(iy);
            for ix in 0..self.nx {
                let v = self.get(ix, iy);
                if v.is_nan() {
                    writeln!(w, "{},{},nan", self.x(ix), y)?;
                } else {
                    writeln!(w, "{},{},{}", self.x(ix), y, v)?;
                }
            }
        }
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut lines = BufReader::new(r).lines();
        let first = lines.next().ok_or_else(|| Error::Parse("empty field file".into()))??;
        let json = first
            .strip_prefix('#')
            .ok_or_else(|| Error::Parse("missing '# {json}' header line".into()))?;
        let header: Header = serde_json::from_str(json.trim())?;
        let mut values = Vec::with_capacity(header.nx * header.ny);
        for (lineno, line) in lines.enumerate() {
            let line = line?;
            if line.is_empty() || (lineno == 0 && line.starts_with('x')) {
                continue;
            }
            let v = line
                .rsplit(',')
                .next()
                .ok_or_else(|| Error::Parse(format!("malformed row: {line}")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("bad value {v:?}: {e}")))?;
            values.push(v);
        }
        if values.len() != header.nx * header.ny {
            return Err(Error::Parse(format!(
                "expected {} rows, found {}",
                header.nx * header.ny,
                values.len()
            )));
        }
        Ok(Self {
            nx: header.nx,
            ny: header.ny,
            x_range: header.x_range,
            y_range: header.y_range,
            values,
            metadata: header.metadata,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = std::fs::File::create(path)?;
        let mut w = std::io::BufWriter::new(file);
        self.write_csv(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_csv(std::fs::File::open(path)?)
    }
}

/// Asymptotic fields available to [`sweep`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldKind {
    SteadyState,
    AccTimeOrder1,
    AccTimeNonperturbative { s_base: f64 },
    TruncatedAccTime,
}

impl FieldKind {
    pub fn name(&self) -> &'static str {
        match self {
            FieldKind::SteadyState => "steady_state",
            FieldKind::AccTimeOrder1 => "acc_time_order1",
            FieldKind::AccTimeNonperturbative { .. } => "acc_time_nonperturbative",
            FieldKind::TruncatedAccTime => "truncated_acc_time",
        }
    }

    pub fn nonperturbative() -> Self {
        FieldKind::AccTimeNonperturbative {
            s_base: DEFAULT_S_BASE,
        }
    }
}

/// A precomputed evaluator for one [`FieldKind`].
pub enum Evaluator {
    SteadyState(SteadyState<f64>),
    AccTimeOrder1(AccTimeOrder1<f64>),
    Nonperturbative(NonperturbativeAccTime<f64>),
    Truncated(TruncatedAccTime<f64>),
}

impl Evaluator {
    pub fn new(scene: &Scene<f64>, kind: FieldKind) -> Result<Self> {
        Ok(match kind {
            FieldKind::SteadyState => Evaluator::SteadyState(SteadyState::new(scene)?),
            FieldKind::AccTimeOrder1 => Evaluator::AccTimeOrder1(AccTimeOrder1::new(scene)?),
            FieldKind::AccTimeNonperturbative { s_base } => {
                Evaluator::Nonperturbative(NonperturbativeAccTime::new(scene, s_base)?)
            }
            FieldKind::TruncatedAccTime => Evaluator::Truncated(TruncatedAccTime::new(scene)?),
        })
    }

    pub fn eval(&self, x: Point2<f64>) -> Result<f64> {
        match self {
            Evaluator::SteadyState(e) => e.eval(x),
            Evaluator::AccTimeOrder1(e) => e.eval(x),
            Evaluator::Nonperturbative(e) => e.eval(x),
            Evaluator::Truncated(e) => e.eval(x),
        }
    }
}

/// Sampling and masking controls for [`sweep`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    pub nx: usize,
    pub ny: usize,
    pub x_range: [f64; 2],
    pub y_range: [f64; 2],
    /// Radius masked around hole centers and, when the initial mass is
    /// nonzero, around `x0`. `None` means `2 ε`.
    pub exclusion: Option<f64>,
}

impl SweepOptions {
    pub fn square(n: usize) -> Self {
        Self {
            nx: n,
            ny: n,
            x_range: [-1.0, 1.0],
            y_range: [-1.0, 1.0],
            exclusion: None,
        }
    }

    pub fn with_exclusion(mut self, r: f64) -> Self {
        self.exclusion = Some(r);
        self
    }
}

/// True where the scene or the exclusion radius hides the node.
pub fn is_masked(scene: &Scene<f64>, x: Point2<f64>, exclusion: f64) -> bool {
    if x.norm() > 1.0 {
        return true;
    }
    let hole_r = scene.epsilon().max(exclusion);
    if scene.centers().any(|c| x.distance(c) <= hole_r) {
        return true;
    }
    scene.gamma0() != 0.0 && x.distance(scene.x0()) <= exclusion
}

/// Evaluates `kind` on the lattice. Evaluation failures at individual nodes
/// are masked and counted in the log; setup failures are returned.
pub fn sweep(scene: &Scene<f64>, kind: FieldKind, opts: SweepOptions) -> Result<FieldGrid> {
    let eval = Evaluator::new(scene, kind)?;
    sweep_with(scene, kind.name(), opts, |x| eval.eval(x)).map(|mut grid| {
        if let FieldKind::AccTimeNonperturbative { s_base } = kind {
            grid.metadata = grid.metadata.with_param("s_base", s_base);
        }
        grid
    })
}

/// [`sweep`] for an arbitrary pointwise evaluator.
pub fn sweep_with<F>(scene: &Scene<f64>, field: &str, opts: SweepOptions, f: F) -> Result<FieldGrid>
where
    F: Fn(Point2<f64>) -> Result<f64> + Sync,
{
    let exclusion = opts.exclusion.unwrap_or(2.0 * scene.epsilon());
    let metadata = FieldMetadata::new(scene.fingerprint(), field).with_param("exclusion", exclusion);
    let mut grid = FieldGrid::with_extent(opts.nx, opts.ny, opts.x_range, opts.y_range, metadata);
    let nx = grid.nx;
    let (xr, yr, ny) = (grid.x_range, grid.y_range, grid.ny);
    let failures: usize = grid
        .values
        .par_chunks_mut(nx.max(1))
        .enumerate()
        .map(|(iy, row)| {
            let y = lattice_coord(yr, ny, iy);
            let mut failed = 0;
            for (ix, slot) in row.iter_mut().enumerate() {
                let x = Point2::new(lattice_coord(xr, nx, ix), y);
                *slot = if is_masked(scene, x, exclusion) {
                    f64::NAN
                } else {
                    match f(x) {
                        Ok(v) => v,
                        Err(e) => {
                            log::debug!("masking ({}, {}): {}", x.x, x.y, e);
                            failed += 1;
                            f64::NAN
                        }
                    }
                };
            }
            failed
        })
        .sum();
    if failures > 0 {
        log::warn!("{field}: {failures} nodes failed to evaluate and were masked");
    }
    grid.metadata = grid.metadata.with_param("failed_nodes", failures);
    Ok(grid)
}

/// Relative differences between a field and a reference on the same lattice.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorReport {
    /// `max |a - b| / |b|` over compared nodes.
    pub linf_rel: f64,
    /// `sqrt(Σ (a - b)^2 / Σ b^2)`.
    pub l2_rel: f64,
    pub max_location: [f64; 2],
    pub max_value: f64,
    pub max_reference: f64,
    pub nodes_compared: usize,
}

/// Compares `a` against reference `b` on nodes finite in both and outside
/// every `(center, radius)` exclusion disc.
pub fn compare_fields(a: &FieldGrid, b: &FieldGrid, exclusions: &[(Point2<f64>, f64)]) -> Result<ErrorReport> {
    if a.nx != b.nx || a.ny != b.ny {
        return Err(Error::GridMismatch {
            reason: format!("{}x{} vs {}x{}", a.nx, a.ny, b.nx, b.ny),
        });
    }
    if a.x_range != b.x_range || a.y_range != b.y_range {
        return Err(Error::GridMismatch {
            reason: "extents differ".into(),
        });
    }
    let mut report = ErrorReport {
        linf_rel: 0.0,
        l2_rel: 0.0,
        max_location: [f64::NAN, f64::NAN],
        max_value: f64::NAN,
        max_reference: f64::NAN,
        nodes_compared: 0,
    };
    let (mut num, mut den) = (0.0, 0.0);
    for iy in 0..a.ny {
        for ix in 0..a.nx {
            let (va, vb) = (a.get(ix, iy), b.get(ix, iy));
            if !(va.is_finite() && vb.is_finite()) {
                continue;
            }
            let x = a.node(ix, iy);
            if exclusions.iter().any(|&(c, r)| x.distance(c) <= r) {
                continue;
            }
            let diff = va - vb;
            num += diff * diff;
            den += vb * vb;
            let rel = diff.abs() / vb.abs();
            if rel > report.linf_rel || report.nodes_compared == 0 {
                report.linf_rel = rel;
                report.max_location = [x.x, x.y];
                report.max_value = va;
                report.max_reference = vb;
            }
            report.nodes_compared += 1;
        }
    }
    report.l2_rel = if den > 0.0 { (num / den).sqrt() } else { f64::NAN };
    Ok(report)
}
