//! The reference parameter sets: three classical self-similar sets and
//! three solid bodies, each carrying its known constants so that
//! predictions can bypass estimation.

use serde::{Deserialize, Serialize};

use crate::geometry::{GeometryError, GridSet, Ifs, Similarity};

/// Built-in parameter sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    Cantor,
    Sierpinski,
    Koch,
    Interval,
    Square,
    Disc,
}

/// Exact constants of a built-in set, with a note on where each comes from.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct KnownConstants {
    /// Minkowski dimension.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dimension: Option<f64>,
    /// Minkowski content (strong sense) where it exists; for lattice-type
    /// sets this is the average content and `lattice` is set.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub content: Option<f64>,
    /// Lebesgue volume.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub volume: Option<f64>,
    /// Outer Minkowski content (boundary measure for Lipschitz boundaries).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outer_content: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lattice: Option<bool>,
    pub provenance: String,
}

impl Builtin {
    pub fn parse(name: &str) -> Option<Builtin> {
        match name {
            "cantor" => Some(Builtin::Cantor),
            "sierpinski" => Some(Builtin::Sierpinski),
            "koch" => Some(Builtin::Koch),
            "interval" => Some(Builtin::Interval),
            "square" => Some(Builtin::Square),
            "disc" => Some(Builtin::Disc),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Builtin::Cantor => "cantor",
            Builtin::Sierpinski => "sierpinski",
            Builtin::Koch => "koch",
            Builtin::Interval => "interval",
            Builtin::Square => "square",
            Builtin::Disc => "disc",
        }
    }

    /// Ambient dimension.
    pub fn n(&self) -> usize {
        match self {
            Builtin::Cantor | Builtin::Interval => 1,
            _ => 2,
        }
    }

    pub fn is_solid(&self) -> bool {
        matches!(self, Builtin::Interval | Builtin::Square | Builtin::Disc)
    }

    /// The generating IFS for the self-similar sets.
    pub fn ifs(&self) -> Option<Ifs> {
        let build = |maps: Vec<Similarity>| Ifs::new(maps).expect("builtin IFS is valid");
        match self {
            Builtin::Cantor => Some(
                build(vec![
                    Similarity::homothety(1.0 / 3.0, &[0.0]).unwrap(),
                    Similarity::homothety(1.0 / 3.0, &[2.0 / 3.0]).unwrap(),
                ])
                .with_open_set_hint(crate::geometry::AxisBox {
                    min: vec![0.0],
                    max: vec![1.0],
                })
                .expect("unit interval witnesses the Cantor open set condition"),
            ),
            Builtin::Sierpinski => {
                let height = 3f64.sqrt() / 2.0;
                Some(build(vec![
                    Similarity::homothety(0.5, &[0.0, 0.0]).unwrap(),
                    Similarity::homothety(0.5, &[0.5, 0.0]).unwrap(),
                    Similarity::homothety(0.5, &[0.25, height / 2.0]).unwrap(),
                ]))
            }
            Builtin::Koch => {
                let deg60 = std::f64::consts::FRAC_PI_3;
                let third = 1.0 / 3.0;
                Some(build(vec![
                    Similarity::homothety(third, &[0.0, 0.0]).unwrap(),
                    Similarity::rotation_2d(third, deg60, &[third, 0.0]).unwrap(),
                    Similarity::rotation_2d(third, -deg60, &[0.5, 3f64.sqrt() / 6.0]).unwrap(),
                    Similarity::homothety(third, &[2.0 * third, 0.0]).unwrap(),
                ]))
            }
            _ => None,
        }
    }

    /// Occupancy grid for the solid sets, optionally rescaled by a linear
    /// change of the parameter space.
    pub fn solid_grid(
        &self,
        resolution: f64,
        padding: f64,
        scale: f64,
    ) -> Option<Result<GridSet, GeometryError>> {
        match self {
            Builtin::Interval => Some(GridSet::from_indicator(
                &[0.0],
                &[scale],
                resolution,
                padding,
                move |p| (0.0..=scale).contains(&p[0]),
            )),
            Builtin::Square => Some(GridSet::from_indicator(
                &[0.0, 0.0],
                &[scale, scale],
                resolution,
                padding,
                move |p| (0.0..=scale).contains(&p[0]) && (0.0..=scale).contains(&p[1]),
            )),
            Builtin::Disc => Some(GridSet::from_indicator(
                &[-scale, -scale],
                &[scale, scale],
                resolution,
                padding,
                move |p| p[0] * p[0] + p[1] * p[1] <= scale * scale,
            )),
            _ => None,
        }
    }

    pub fn known(&self) -> KnownConstants {
        let ln2 = 2f64.ln();
        let ln3 = 3f64.ln();
        match self {
            Builtin::Cantor => {
                let d = ln2 / ln3;
                KnownConstants {
                    dimension: Some(d),
                    // average content 2^{-d}/(d(1-d)ln3); the set is
                    // lattice-type, so the tube volume oscillates around
                    // this value instead of converging
                    content: Some(2f64.powf(-d) / (d * (1.0 - d) * ln3)),
                    volume: Some(0.0),
                    outer_content: None,
                    lattice: Some(true),
                    provenance: "d solves 2(1/3)^d = 1; content from the 1-D gap formula; \
                        equal ratios make the set lattice-type"
                        .into(),
                }
            }
            Builtin::Sierpinski => KnownConstants {
                dimension: Some(ln3 / ln2),
                content: None,
                volume: Some(0.0),
                outer_content: None,
                lattice: Some(true),
                provenance: "d solves 3(1/2)^d = 1; strong measurability is not \
                    established for equal-ratio planar gaskets"
                    .into(),
            },
            Builtin::Koch => KnownConstants {
                dimension: Some(2f64.ln() * 2.0 / ln3),
                content: None,
                volume: Some(0.0),
                outer_content: None,
                lattice: Some(true),
                provenance: "d solves 4(1/3)^d = 1".into(),
            },
            Builtin::Interval => KnownConstants {
                dimension: Some(1.0),
                content: Some(1.0),
                volume: Some(1.0),
                outer_content: Some(2.0),
                lattice: None,
                provenance: "λ(S^ε) = 1 + 2ε: d = 1, C = 1, OM = 2 (two endpoints)".into(),
            },
            Builtin::Square => KnownConstants {
                dimension: Some(2.0),
                content: Some(1.0),
                volume: Some(1.0),
                outer_content: Some(4.0),
                lattice: None,
                provenance: "unit square: volume 1, OM = perimeter = 4".into(),
            },
            Builtin::Disc => KnownConstants {
                dimension: Some(2.0),
                content: Some(std::f64::consts::PI),
                volume: Some(std::f64::consts::PI),
                outer_content: Some(2.0 * std::f64::consts::PI),
                lattice: None,
                provenance: "unit disc: volume π, OM = perimeter = 2π".into(),
            },
        }
    }

    /// Cell side used to rasterize for tube geometry when the config does
    /// not override it.
    pub fn default_raster_resolution(&self) -> f64 {
        match self {
            Builtin::Cantor => 3f64.powi(-10),
            Builtin::Sierpinski | Builtin::Koch => 1.0 / 1024.0,
            Builtin::Interval => 1.0 / 8192.0,
            Builtin::Square => 1.0 / 2048.0,
            Builtin::Disc => 1.0 / 1024.0,
        }
    }

    /// Grid spacing used when simulating the field on the solid sets.
    pub fn default_sim_resolution(&self) -> f64 {
        match self {
            Builtin::Interval => 1.0 / 2048.0,
            // 2-D grids grow quadratically; Γ(h) = 0.9995 at h = 1/32
            Builtin::Square | Builtin::Disc => 1.0 / 32.0,
            _ => 1.0 / 2048.0,
        }
    }

    /// Attractor depth when the config does not override it: deep enough to
    /// resolve the set, shallow enough for exact factorization.
    pub fn default_depth(&self) -> u32 {
        match self {
            Builtin::Cantor => 8,      // 256 points
            Builtin::Sierpinski => 7,  // 2187 points
            Builtin::Koch => 5,        // 1024 points
            _ => 1,
        }
    }

    /// Geometry depth for tube measurements, where point budgets are looser.
    pub fn default_geometry_depth(&self) -> u32 {
        match self {
            Builtin::Cantor => 10, // 1024 points at cell size 3^-10
            Builtin::Sierpinski => 10,
            Builtin::Koch => 7,
            _ => 1,
        }
    }
}
