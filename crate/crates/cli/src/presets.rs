//! Named scenes for the standard single-hole and two-hole configurations.

use std::f64::consts::PI;

use perfdisc::{Point, RawHole, RawScene};
use serde_json::{json, Value};

pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub scene: RawScene,
    /// Suggested line cuts, as CLI argument strings.
    pub cuts: Vec<String>,
}

/// Single hole at `a (cos θ1, sin θ1)` with unit mass released at `(b, 0)`.
fn single_hole(theta1: f64, a: f64, b: f64) -> RawScene {
    RawScene::with_nu(0.1, vec![RawHole::new(Point::polar(a, theta1), 1.0)]).source(1.0, Point::new(b, 0.0))
}

fn hole_pair(gamma0: f64) -> RawScene {
    RawScene::with_nu(
        0.1,
        vec![RawHole::new(Point::new(0.2, 0.0), 1.0), RawHole::new(Point::new(-0.2, 0.0), 1.0)],
    )
    .source(gamma0, Point::new(0.0, 0.5))
}

pub fn all() -> Vec<Preset> {
    let radial = |theta: &str| format!("--cut r --theta {theta}");
    vec![
        Preset {
            name: "center",
            description: "single hole at the origin, Φ = 1, ν = 0.1, no initial mass",
            scene: RawScene::with_nu(0.1, vec![RawHole::new(Point::new(0.0, 0.0), 1.0)]),
            cuts: vec![radial("0")],
        },
        Preset {
            name: "offset-hole",
            description: "hole at 0.5(cos π/6, sin π/6), Γ0 = 1 at (0.5, 0), ν = 0.1",
            scene: single_hole(PI / 6.0, 0.5, 0.5),
            cuts: vec![
                radial(&(PI / 6.0).to_string()),
                radial(&(PI / 12.0).to_string()),
                radial("0"),
                "--cut theta --radius 0.5".into(),
            ],
        },
        Preset {
            name: "offset-hole-near-source",
            description: "hole at 0.5(cos 4π/3, sin 4π/3), Γ0 = 1 at (0.1, 0), ν = 0.1",
            scene: single_hole(4.0 * PI / 3.0, 0.5, 0.1),
            cuts: vec![radial(&(4.0 * PI / 3.0).to_string())],
        },
        Preset {
            name: "offset-hole-opposite",
            description: "hole at 0.5(cos 4π/3, sin 4π/3), Γ0 = 1 at (0.5, 0), ν = 0.1",
            scene: single_hole(4.0 * PI / 3.0, 0.5, 0.5),
            cuts: vec!["--cut theta --radius 0.5".into()],
        },
        Preset {
            name: "hole-pair",
            description: "identical holes at (±0.2, 0), no initial mass, ν = 0.1",
            scene: hole_pair(0.0),
            cuts: vec![],
        },
        Preset {
            name: "hole-pair-source",
            description: "identical holes at (±0.2, 0), Γ0 = 1 at (0, 0.5), ν = 0.1",
            scene: hole_pair(1.0),
            cuts: vec![],
        },
    ]
}

pub fn find(name: &str) -> Option<Preset> {
    all().into_iter().find(|p| p.name == name)
}

pub fn describe(p: &Preset) -> Value {
    json!({
        "name": p.name,
        "description": p.description,
        "scene": p.scene,
        "cuts": p.cuts,
    })
}
