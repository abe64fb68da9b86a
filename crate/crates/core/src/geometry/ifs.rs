//! Iterated function systems of contracting similarities and the closed-form
//! dimension/content machinery for the self-similar sets they generate.

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::grid::{CloudSource, PointCloud};
use super::GeometryError;
use crate::seeding::replication_rng;

/// Tolerance used by [`is_lattice_type`] when no explicit value is supplied.
///
/// Rational detection from floating-point log-ratios is a heuristic: it can
/// only fail to find small-denominator rationals, never certify
/// irrationality.
pub const DEFAULT_LATTICE_TOLERANCE: f64 = 1e-9;

const ORTHOGONALITY_TOLERANCE: f64 = 1e-12;

/// A contracting similarity `x ↦ ratio · Q x + translation` with `Q`
/// orthogonal and `0 < ratio < 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Similarity {
    ratio: f64,
    orthogonal: DMatrix<f64>,
    translation: DVector<f64>,
}

impl Similarity {
    pub fn new(
        ratio: f64,
        orthogonal: DMatrix<f64>,
        translation: Vec<f64>,
    ) -> Result<Self, GeometryError> {
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(GeometryError::NonContractive(ratio));
        }
        let n = translation.len();
        if orthogonal.nrows() != n || orthogonal.ncols() != n {
            return Err(GeometryError::DimensionMismatch {
                expected: n,
                got: orthogonal.nrows(),
            });
        }
        let gram = &orthogonal * orthogonal.transpose();
        let deviation = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| {
                let target = if i == j { 1.0 } else { 0.0 };
                (gram[(i, j)] - target).abs()
            })
            .fold(0.0_f64, f64::max);
        if deviation > ORTHOGONALITY_TOLERANCE {
            return Err(GeometryError::NotOrthogonal(deviation));
        }
        Ok(Self {
            ratio,
            orthogonal,
            translation: DVector::from_vec(translation),
        })
    }

    /// Similarity with identity orthogonal part.
    pub fn homothety(ratio: f64, translation: &[f64]) -> Result<Self, GeometryError> {
        let n = translation.len();
        Self::new(ratio, DMatrix::identity(n, n), translation.to_vec())
    }

    /// Planar similarity rotating by `angle` radians.
    pub fn rotation_2d(ratio: f64, angle: f64, translation: &[f64]) -> Result<Self, GeometryError> {
        let (s, c) = angle.sin_cos();
        let q = DMatrix::from_row_slice(2, 2, &[c, -s, s, c]);
        Self::new(ratio, q, translation.to_vec())
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    pub fn orthogonal(&self) -> &DMatrix<f64> {
        &self.orthogonal
    }

    pub fn translation(&self) -> &[f64] {
        self.translation.as_slice()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let v = DVector::from_column_slice(x);
        let out = &self.orthogonal * v * self.ratio + &self.translation;
        out.as_slice().to_vec()
    }

    /// The unique fixed point, solving `(I - ratio·Q) x = translation`.
    pub fn fixed_point(&self) -> Vec<f64> {
        let n = self.dim();
        let a = DMatrix::identity(n, n) - &self.orthogonal * self.ratio;
        let x = a
            .lu()
            .solve(&self.translation)
            .expect("I - rQ is nonsingular for r < 1");
        x.as_slice().to_vec()
    }
}

/// Axis-aligned box, used as a user-asserted open-set witness.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisBox {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl AxisBox {
    fn corners(&self) -> Vec<Vec<f64>> {
        let n = self.min.len();
        (0..1usize << n)
            .map(|mask| {
                (0..n)
                    .map(|k| {
                        if mask >> k & 1 == 1 {
                            self.max[k]
                        } else {
                            self.min[k]
                        }
                    })
                    .collect()
            })
            .collect()
    }

    fn contains(&self, p: &[f64], tol: f64) -> bool {
        p.iter()
            .zip(self.min.iter().zip(&self.max))
            .all(|(&x, (&lo, &hi))| x >= lo - tol && x <= hi + tol)
    }
}

/// An iterated function system of at least two contracting similarities.
#[derive(Debug, Clone)]
pub struct Ifs {
    maps: Vec<Similarity>,
    open_set_hint: Option<AxisBox>,
}

impl Ifs {
    pub fn new(maps: Vec<Similarity>) -> Result<Self, GeometryError> {
        if maps.len() < 2 {
            return Err(GeometryError::TooFewMaps(maps.len()));
        }
        let n = maps[0].dim();
        for m in &maps[1..] {
            if m.dim() != n {
                return Err(GeometryError::DimensionMismatch {
                    expected: n,
                    got: m.dim(),
                });
            }
        }
        Ok(Self {
            maps,
            open_set_hint: None,
        })
    }

    /// Attach an axis-aligned open-set witness. The images of the box must
    /// stay inside the box and be pairwise disjoint; this is checked
    /// numerically on the box corners and the bounding boxes of the images.
    pub fn with_open_set_hint(mut self, hint: AxisBox) -> Result<Self, GeometryError> {
        let tol = 1e-9;
        if hint.min.len() != self.dim() || hint.max.len() != self.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: self.dim(),
                got: hint.min.len(),
            });
        }
        let corners = hint.corners();
        let mut image_boxes = Vec::with_capacity(self.maps.len());
        for (i, f) in self.maps.iter().enumerate() {
            let mut lo = vec![f64::INFINITY; self.dim()];
            let mut hi = vec![f64::NEG_INFINITY; self.dim()];
            for c in &corners {
                let fc = f.apply(c);
                if !hint.contains(&fc, tol) {
                    return Err(GeometryError::OpenSetViolation(format!(
                        "image of a corner under map {i} falls outside the box"
                    )));
                }
                for k in 0..self.dim() {
                    lo[k] = lo[k].min(fc[k]);
                    hi[k] = hi[k].max(fc[k]);
                }
            }
            image_boxes.push((lo, hi));
        }
        for i in 0..image_boxes.len() {
            for j in i + 1..image_boxes.len() {
                let (lo_i, hi_i) = &image_boxes[i];
                let (lo_j, hi_j) = &image_boxes[j];
                let separated = (0..self.dim())
                    .any(|k| hi_i[k] <= lo_j[k] + tol || hi_j[k] <= lo_i[k] + tol);
                if !separated {
                    return Err(GeometryError::OpenSetViolation(format!(
                        "images of maps {i} and {j} overlap"
                    )));
                }
            }
        }
        self.open_set_hint = Some(hint);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.maps[0].dim()
    }

    pub fn maps(&self) -> &[Similarity] {
        &self.maps
    }

    pub fn open_set_hint(&self) -> Option<&AxisBox> {
        self.open_set_hint.as_ref()
    }

    pub fn ratios(&self) -> Vec<f64> {
        self.maps.iter().map(Similarity::ratio).collect()
    }

    pub fn fixed_points(&self) -> Vec<Vec<f64>> {
        self.maps.iter().map(Similarity::fixed_point).collect()
    }

    /// Bounding box of the fixed points of the maps.
    pub fn fixed_point_box(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.dim();
        let mut lo = vec![f64::INFINITY; n];
        let mut hi = vec![f64::NEG_INFINITY; n];
        for p in self.fixed_points() {
            for k in 0..n {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        (lo, hi)
    }

    pub fn read_file(path: impl AsRef<Path>) -> Result<Self, GeometryError> {
        let text = std::fs::read_to_string(path)?;
        let spec: IfsFile = serde_json::from_str(&text)?;
        spec.build()
    }

    pub fn write_file(&self, path: impl AsRef<Path>) -> Result<(), GeometryError> {
        let spec = IfsFile::from_ifs(self);
        let text = serde_json::to_string_pretty(&spec)?;
        std::fs::write(path, text)?;
        Ok(())
    }
}

/// On-disk description of an IFS:
/// `{n, maps: [{ratio, matrix, translation}], open_set_box}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IfsFile {
    pub n: usize,
    pub maps: Vec<IfsMapSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub open_set_box: Option<BoxSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IfsMapSpec {
    pub ratio: f64,
    /// Row-major n×n orthogonal matrix.
    pub matrix: Vec<Vec<f64>>,
    pub translation: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoxSpec {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl IfsFile {
    pub fn build(&self) -> Result<Ifs, GeometryError> {
        let mut maps = Vec::with_capacity(self.maps.len());
        for m in &self.maps {
            if m.matrix.len() != self.n || m.matrix.iter().any(|row| row.len() != self.n) {
                return Err(GeometryError::DimensionMismatch {
                    expected: self.n,
                    got: m.matrix.len(),
                });
            }
            let flat: Vec<f64> = m.matrix.iter().flatten().copied().collect();
            let q = DMatrix::from_row_slice(self.n, self.n, &flat);
            maps.push(Similarity::new(m.ratio, q, m.translation.clone())?);
        }
        let ifs = Ifs::new(maps)?;
        match &self.open_set_box {
            Some(b) => ifs.with_open_set_hint(AxisBox {
                min: b.min.clone(),
                max: b.max.clone(),
            }),
            None => Ok(ifs),
        }
    }

    pub fn from_ifs(ifs: &Ifs) -> Self {
        let n = ifs.dim();
        IfsFile {
            n,
            maps: ifs
                .maps()
                .iter()
                .map(|m| IfsMapSpec {
                    ratio: m.ratio(),
                    matrix: (0..n)
                        .map(|i| (0..n).map(|j| m.orthogonal()[(i, j)]).collect())
                        .collect(),
                    translation: m.translation().to_vec(),
                })
                .collect(),
            open_set_box: ifs.open_set_hint().map(|b| BoxSpec {
                min: b.min.clone(),
                max: b.max.clone(),
            }),
        }
    }
}

fn check_ratios(ratios: &[f64]) -> Result<(), GeometryError> {
    if ratios.len() < 2 {
        return Err(GeometryError::TooFewMaps(ratios.len()));
    }
    for &c in ratios {
        if !(c > 0.0 && c < 1.0) || !c.is_finite() {
            return Err(GeometryError::NonContractive(c));
        }
    }
    Ok(())
}

/// Solve the Moran equation `Σ cᵢᵈ = 1` for the similarity dimension `d`.
///
/// The map `d ↦ Σ cᵢᵈ` is strictly decreasing with value `k ≥ 2` at `d = 0`,
/// so the root is unique; a bisection-safeguarded Newton iteration drives the
/// residual below 1e-14.
pub fn moran_dimension(ratios: &[f64]) -> Result<f64, GeometryError> {
    check_ratios(ratios)?;
    let g = |d: f64| ratios.iter().map(|c| c.powf(d)).sum::<f64>() - 1.0;
    let g_prime = |d: f64| ratios.iter().map(|c| c.powf(d) * c.ln()).sum::<f64>();

    let mut lo = 0.0_f64;
    let mut hi = 1.0_f64;
    while g(hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    let mut d = 0.5 * (lo + hi);
    for _ in 0..200 {
        let val = g(d);
        if val.abs() < 1e-15 {
            break;
        }
        if val > 0.0 {
            lo = d;
        } else {
            hi = d;
        }
        let newton = d - val / g_prime(d);
        d = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo < f64::EPSILON * d.max(1.0) {
            break;
        }
    }
    Ok(d)
}

/// Heuristic lattice-type detection: true iff every pairwise ratio
/// `log cᵢ / log cⱼ` looks rational.
///
/// Each ratio is expanded as a continued fraction; a partial quotient larger
/// than `1/tolerance` means the remainder collapsed, i.e. a rational was
/// found. If the convergent denominators exceed `1/√tolerance` without such
/// a collapse, no small-denominator rational exists and the pair is treated
/// as irrational. Floating-point inputs can never certify irrationality, so
/// the result is a heuristic by construction.
pub fn is_lattice_type(ratios: &[f64], tolerance: f64) -> Result<bool, GeometryError> {
    check_ratios(ratios)?;
    assert!(tolerance > 0.0 && tolerance < 1.0, "tolerance must be in (0, 1)");
    for i in 0..ratios.len() {
        for j in i + 1..ratios.len() {
            let x = ratios[i].ln() / ratios[j].ln();
            if !looks_rational(x, tolerance) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn looks_rational(x: f64, tolerance: f64) -> bool {
    let quotient_cap = 1.0 / tolerance;
    let denominator_cap = (1.0 / tolerance).sqrt();
    let mut y = x.abs();
    let mut q_prev = 0.0_f64;
    let mut q_cur = 1.0_f64;
    for _ in 0..64 {
        let a = y.floor();
        if a > quotient_cap {
            return true;
        }
        let q_next = a * q_cur + q_prev;
        if q_next > denominator_cap {
            return false;
        }
        q_prev = q_cur;
        q_cur = q_next;
        let frac = y - a;
        if frac < tolerance {
            return true;
        }
        y = 1.0 / frac;
    }
    false
}

/// Minkowski content of a 1-D self-similar set together with a lattice-type
/// warning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Content1d {
    pub value: f64,
    /// Set when the ratios look lattice-type, in which case the set is not
    /// Minkowski measurable in the strong sense and the value is only the
    /// average content.
    pub lattice_warning: bool,
}

/// Closed-form Minkowski content of a 1-D self-similar set:
///
/// `C = 2^{1-d} Σ ℓⱼᵈ / (d (1-d) Σ cᵢᵈ log(1/cᵢ))`,
///
/// where the `ℓⱼ` are the lengths of the gaps of `I \ ∪ fᵢ(I)` and `d` the
/// Moran dimension.
pub fn content_1d(
    ratios: &[f64],
    gap_lengths: &[f64],
    d: f64,
) -> Result<Content1d, GeometryError> {
    check_ratios(ratios)?;
    if gap_lengths.is_empty() {
        return Err(GeometryError::NoGaps);
    }
    if let Some(&bad) = gap_lengths.iter().find(|&&g| !(g > 0.0)) {
        return Err(GeometryError::NonPositiveGap(bad));
    }
    if !(d > 0.0 && d < 1.0) {
        return Err(GeometryError::DimensionOutOfRange(d));
    }
    let residual = (ratios.iter().map(|c| c.powf(d)).sum::<f64>() - 1.0).abs();
    if residual > 1e-10 {
        return Err(GeometryError::MoranMismatch(residual));
    }
    let gap_sum: f64 = gap_lengths.iter().map(|l| l.powf(d)).sum();
    let log_sum: f64 = ratios.iter().map(|c| c.powf(d) * (1.0 / c).ln()).sum();
    let value = 2.0_f64.powf(1.0 - d) * gap_sum / (d * (1.0 - d) * log_sum);
    Ok(Content1d {
        value,
        lattice_warning: is_lattice_type(ratios, DEFAULT_LATTICE_TOLERANCE)?,
    })
}

/// How to generate an attractor point cloud.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttractorMode {
    /// All `k^depth` map compositions applied to the fixed point of the
    /// first map; reproducible bit for bit.
    Deterministic { point_budget: usize },
    /// Random orbit of the given length after a fixed burn-in of 100 steps.
    ChaosGame { points: usize, seed: u64 },
}

impl AttractorMode {
    pub fn deterministic() -> Self {
        AttractorMode::Deterministic {
            point_budget: 1 << 22,
        }
    }
}

const CHAOS_GAME_BURN_IN: usize = 100;

/// Generate a point cloud approximating the attractor `S = ∪ fᵢ(S)`.
///
/// Every returned point lies within Hausdorff distance
/// `c_max^depth · diam(fixed-point hull)` of the attractor in deterministic
/// mode.
pub fn attractor(ifs: &Ifs, depth: u32, mode: AttractorMode) -> Result<PointCloud, GeometryError> {
    assert!(depth >= 1, "attractor depth must be at least 1");
    let n = ifs.dim();
    let base = ifs.maps()[0].fixed_point();
    match mode {
        AttractorMode::Deterministic { point_budget } => {
            let k = ifs.maps().len() as u128;
            let needed = k
                .checked_pow(depth)
                .unwrap_or(u128::MAX);
            if needed > point_budget as u128 {
                return Err(GeometryError::ExplosionGuard {
                    needed,
                    budget: point_budget,
                });
            }
            let mut pts: Vec<Vec<f64>> = vec![base];
            for _ in 0..depth {
                let mut next = Vec::with_capacity(pts.len() * ifs.maps().len());
                for f in ifs.maps() {
                    for p in &pts {
                        next.push(f.apply(p));
                    }
                }
                pts = next;
            }
            let coords: Vec<f64> = pts.into_iter().flatten().collect();
            PointCloud::new(n, coords, depth, CloudSource::DeterministicIteration)
        }
        AttractorMode::ChaosGame { points, seed } => {
            if points == 0 {
                return Err(GeometryError::EmptyCloud);
            }
            let mut rng = replication_rng(seed, 0);
            let mut current = base;
            let mut coords = Vec::with_capacity(points * n);
            for step in 0..CHAOS_GAME_BURN_IN + points {
                let pick = rand::Rng::gen_range(&mut rng, 0..ifs.maps().len());
                current = ifs.maps()[pick].apply(&current);
                if step >= CHAOS_GAME_BURN_IN {
                    coords.extend_from_slice(&current);
                }
            }
            PointCloud::new(n, coords, depth, CloudSource::ChaosGame)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cantor() -> Ifs {
        Ifs::new(vec![
            Similarity::homothety(1.0 / 3.0, &[0.0]).unwrap(),
            Similarity::homothety(1.0 / 3.0, &[2.0 / 3.0]).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn moran_closed_forms() {
        assert_relative_eq!(moran_dimension(&[0.5, 0.5]).unwrap(), 1.0, epsilon = 1e-14);
        assert_relative_eq!(
            moran_dimension(&[1.0 / 3.0, 1.0 / 3.0]).unwrap(),
            2f64.ln() / 3f64.ln(),
            epsilon = 1e-12
        );
        assert_relative_eq!(
            moran_dimension(&[0.5, 0.5, 0.5]).unwrap(),
            3f64.ln() / 2f64.ln(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn moran_residual_is_tiny() {
        let ratios = [0.5, 1.0 / 3.0];
        let d = moran_dimension(&ratios).unwrap();
        let res: f64 = ratios.iter().map(|c| c.powf(d)).sum::<f64>() - 1.0;
        assert!(res.abs() < 1e-14, "residual {res}");
        // independently computed root of (1/2)^d + (1/3)^d = 1
        assert_relative_eq!(d, 0.787_884_911_025_869_8, epsilon = 1e-12);
    }

    #[test]
    fn moran_rejects_bad_input() {
        assert!(matches!(
            moran_dimension(&[0.5]),
            Err(GeometryError::TooFewMaps(1))
        ));
        assert!(matches!(
            moran_dimension(&[0.5, 1.2]),
            Err(GeometryError::NonContractive(_))
        ));
        assert!(matches!(
            moran_dimension(&[0.5, 0.0]),
            Err(GeometryError::NonContractive(_))
        ));
    }

    #[test]
    fn lattice_detection() {
        assert!(is_lattice_type(&[1.0 / 3.0, 1.0 / 3.0], 1e-9).unwrap());
        // log(1/2)/log(1/4) = 1/2 exactly
        assert!(is_lattice_type(&[0.5, 0.25], 1e-9).unwrap());
        // ln2/ln3 is irrational (classical); no small-denominator rational
        assert!(!is_lattice_type(&[0.5, 1.0 / 3.0], 1e-9).unwrap());
    }

    #[test]
    fn content_of_cantor_set() {
        let d = 2f64.ln() / 3f64.ln();
        let c = content_1d(&[1.0 / 3.0, 1.0 / 3.0], &[1.0 / 3.0], d).unwrap();
        // 2^{-d} / (d (1-d) ln 3), evaluated with 40-digit arithmetic
        assert_relative_eq!(c.value, 2.524_275_331_466_852_7, max_relative = 1e-12);
        assert!(c.lattice_warning);
    }

    #[test]
    fn content_non_lattice_pair() {
        let ratios = [0.5, 1.0 / 3.0];
        let d = moran_dimension(&ratios).unwrap();
        let c = content_1d(&ratios, &[1.0 / 6.0], d).unwrap();
        assert!(c.value.is_finite() && c.value > 0.0);
        assert!(!c.lattice_warning);
        // independent high-precision evaluation of the same formula
        assert_relative_eq!(c.value, 1.955_811_361_865_868_7, max_relative = 1e-11);
    }

    #[test]
    fn content_rejects_degenerate_dimension() {
        assert!(matches!(
            content_1d(&[1.0 / 3.0, 1.0 / 3.0], &[1.0 / 3.0], 1.0),
            Err(GeometryError::DimensionOutOfRange(_))
        ));
        assert!(matches!(
            content_1d(&[1.0 / 3.0, 1.0 / 3.0], &[1.0 / 3.0], 0.9),
            Err(GeometryError::MoranMismatch(_))
        ));
    }

    #[test]
    fn deterministic_cantor_depth_two() {
        let cloud = attractor(&cantor(), 2, AttractorMode::deterministic()).unwrap();
        let mut xs: Vec<f64> = cloud.coords().to_vec();
        xs.sort_by(f64::total_cmp);
        let expected = [0.0, 2.0 / 9.0, 2.0 / 3.0, 8.0 / 9.0];
        assert_eq!(xs.len(), 4);
        for (a, b) in xs.iter().zip(expected) {
            assert_relative_eq!(*a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn sierpinski_depth_one_is_three_points() {
        let h = 3f64.sqrt() / 2.0;
        let ifs = Ifs::new(vec![
            Similarity::homothety(0.5, &[0.0, 0.0]).unwrap(),
            Similarity::homothety(0.5, &[0.5, 0.0]).unwrap(),
            Similarity::homothety(0.5, &[0.25, h / 2.0]).unwrap(),
        ])
        .unwrap();
        let cloud = attractor(&ifs, 1, AttractorMode::deterministic()).unwrap();
        assert_eq!(cloud.len(), 3);
    }

    #[test]
    fn explosion_guard_fires() {
        let err = attractor(
            &cantor(),
            10,
            AttractorMode::Deterministic { point_budget: 100 },
        )
        .unwrap_err();
        assert!(matches!(err, GeometryError::ExplosionGuard { .. }));
    }

    #[test]
    fn chaos_game_is_reproducible_and_near_attractor() {
        let mode = AttractorMode::ChaosGame {
            points: 500,
            seed: 11,
        };
        let a = attractor(&cantor(), 8, mode).unwrap();
        let b = attractor(&cantor(), 8, mode).unwrap();
        assert_eq!(a.coords(), b.coords());
        // middle third (1/3, 2/3) is empty for the Cantor set; after burn-in
        // the orbit is within ~0.9^100 of the attractor
        for p in a.coords() {
            assert!(
                !(*p > 1.0 / 3.0 + 1e-6 && *p < 2.0 / 3.0 - 1e-6),
                "orbit point {p} in the middle gap"
            );
            assert!((-1e-9..=1.0 + 1e-9).contains(p));
        }
    }

    #[test]
    fn open_set_hint_accepts_cantor_and_rejects_overlap() {
        let hint = AxisBox {
            min: vec![0.0],
            max: vec![1.0],
        };
        assert!(cantor().with_open_set_hint(hint.clone()).is_ok());

        let overlapping = Ifs::new(vec![
            Similarity::homothety(0.7, &[0.0]).unwrap(),
            Similarity::homothety(0.7, &[0.3]).unwrap(),
        ])
        .unwrap();
        assert!(matches!(
            overlapping.with_open_set_hint(hint),
            Err(GeometryError::OpenSetViolation(_))
        ));
    }

    #[test]
    fn ifs_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cantor.json");
        let ifs = cantor();
        ifs.write_file(&path).unwrap();
        let back = Ifs::read_file(&path).unwrap();
        assert_eq!(back.ratios(), ifs.ratios());
        assert_eq!(back.maps()[1].translation(), ifs.maps()[1].translation());
    }

    #[test]
    fn similarity_validation() {
        let skewed = DMatrix::from_row_slice(2, 2, &[1.0, 0.1, 0.0, 1.0]);
        assert!(matches!(
            Similarity::new(0.5, skewed, vec![0.0, 0.0]),
            Err(GeometryError::NotOrthogonal(_))
        ));
        assert!(Similarity::rotation_2d(0.5, 1.0, &[0.3, 0.4]).is_ok());
    }

    #[test]
    fn fixed_point_solves_equation() {
        let f = Similarity::rotation_2d(0.6, 0.7, &[1.0, -2.0]).unwrap();
        let p = f.fixed_point();
        let fp = f.apply(&p);
        assert_relative_eq!(p[0], fp[0], epsilon = 1e-12);
        assert_relative_eq!(p[1], fp[1], epsilon = 1e-12);
    }
}
