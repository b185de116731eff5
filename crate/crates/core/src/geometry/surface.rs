//! Anterior ocular surface `z = h(r)`: elliptic cornea, polynomial limbus and
//! circular sclera, joined with continuous first and second derivatives.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Radius (cm) where the cornea hands over to the limbus.
pub const LIMBUS_START: f64 = 0.5;
/// Radius (cm) where the limbus hands over to the sclera.
pub const LIMBUS_END: f64 = 0.7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorneaParams {
    /// Apical radius of curvature (cm).
    pub k_c: f64,
    /// Squared eccentricity.
    pub e2: f64,
    pub a_c: f64,
    pub b_c: f64,
}

impl CorneaParams {
    pub fn new(k_c: f64, e2: f64) -> Result<Self> {
        if !(k_c > 0.0) {
            return Err(Error::Geometry(format!(
                "corneal radius K_c must be positive, got {k_c}"
            )));
        }
        if !(0.0..1.0).contains(&e2) {
            return Err(Error::Geometry(format!("corneal e^2 must lie in [0, 1), got {e2}")));
        }
        let b_c = (1.0 - e2) * k_c;
        let a_c = (k_c * b_c).sqrt();
        if a_c <= LIMBUS_START {
            return Err(Error::Geometry(format!(
                "corneal ellipse semi-axis a_c = {a_c:.4} cm does not reach r = {LIMBUS_START}"
            )));
        }
        Ok(Self { k_c, e2, a_c, b_c })
    }

    /// (h, h', h'') of the ellipse `z = -b + b sqrt(1 - r^2/a^2)`.
    pub fn eval(&self, r: f64) -> [f64; 3] {
        let a2 = self.a_c * self.a_c;
        let b = self.b_c;
        let s = (1.0 - r * r / a2).sqrt();
        [-b + b * s, -b * r / (a2 * s), -b / (a2 * s * s * s)]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScleraParams {
    /// Scleral radius (cm).
    pub r_s: f64,
    /// Height of the scleral centre (cm, negative).
    pub z_s: f64,
    /// Radial extent of the modelled domain (cm).
    pub r_eye: f64,
}

impl ScleraParams {
    pub fn eval(&self, r: f64) -> [f64; 3] {
        let q = self.r_s * self.r_s - r * r;
        let root = q.sqrt();
        [self.z_s + root, -r / root, -self.r_s * self.r_s / (q * root)]
    }
}

/// Coefficients of
/// `z = (r-0.7)^3 (l1 + l2 (r-0.5) + l3 (r-0.5)^2) + (r-0.5)^3 (l4 + l5 (r-0.7) + l6 (r-0.7)^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimbusCoefficients {
    pub l: [f64; 6],
}

impl LimbusCoefficients {
    /// Value, slope and curvature contributed by each coefficient at `r`.
    fn basis(r: f64) -> [[f64; 3]; 6] {
        let u = r - LIMBUS_START;
        let v = r - LIMBUS_END;
        // f = c^3 * q with c the cubic factor and q the monomial in the other variable
        let term = |c: f64, q: [f64; 3]| -> [f64; 3] {
            let c3 = [c * c * c, 3.0 * c * c, 6.0 * c];
            [
                c3[0] * q[0],
                c3[1] * q[0] + c3[0] * q[1],
                c3[2] * q[0] + 2.0 * c3[1] * q[1] + c3[0] * q[2],
            ]
        };
        [
            term(v, [1.0, 0.0, 0.0]),
            term(v, [u, 1.0, 0.0]),
            term(v, [u * u, 2.0 * u, 2.0]),
            term(u, [1.0, 0.0, 0.0]),
            term(u, [v, 1.0, 0.0]),
            term(u, [v * v, 2.0 * v, 2.0]),
        ]
    }

    pub fn eval(&self, r: f64) -> [f64; 3] {
        let basis = Self::basis(r);
        let mut out = [0.0; 3];
        for (coef, b) in self.l.iter().zip(basis.iter()) {
            for k in 0..3 {
                out[k] += coef * b[k];
            }
        }
        out
    }
}

/// Matches value, slope and curvature of the limbus polynomial to the cornea at
/// r = 0.5 and to the sclera at r = 0.7.
pub fn solve_limbus_coefficients(cornea: &CorneaParams, sclera: &ScleraParams) -> Result<LimbusCoefficients> {
    if sclera.r_s <= LIMBUS_END {
        return Err(Error::Geometry(format!(
            "scleral radius {} cm does not reach r = {LIMBUS_END}",
            sclera.r_s
        )));
    }
    let left = cornea.eval(LIMBUS_START);
    let right = sclera.eval(LIMBUS_END);
    let b_left = LimbusCoefficients::basis(LIMBUS_START);
    let b_right = LimbusCoefficients::basis(LIMBUS_END);

    let mut a = faer::Mat::<f64>::zeros(6, 6);
    let mut rhs = faer::Mat::<f64>::zeros(6, 1);
    for k in 0..3 {
        for j in 0..6 {
            a[(k, j)] = b_left[j][k];
            a[(k + 3, j)] = b_right[j][k];
        }
        rhs[(k, 0)] = left[k];
        rhs[(k + 3, 0)] = right[k];
    }
    let scale = a.norm_max();
    let lu = a.partial_piv_lu();
    let mut min_pivot = f64::INFINITY;
    let u = lu.U();
    for i in 0..6 {
        min_pivot = min_pivot.min(u[(i, i)].abs());
    }
    if !(min_pivot > 1e-12 * scale) {
        return Err(Error::Geometry("singular limbus matching system".into()));
    }
    use faer::linalg::solvers::Solve;
    let sol = lu.solve(&rhs);
    let mut l = [0.0; 6];
    for (i, li) in l.iter_mut().enumerate() {
        *li = sol[(i, 0)];
    }
    if l.iter().any(|x| !x.is_finite()) {
        return Err(Error::Geometry("non-finite limbus coefficients".into()));
    }
    Ok(LimbusCoefficients { l })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EyePreset {
    FlatCornea,
    Average,
    SteepCornea,
    FlatSclera,
}

impl EyePreset {
    pub const ALL: [EyePreset; 4] = [
        EyePreset::FlatCornea,
        EyePreset::Average,
        EyePreset::SteepCornea,
        EyePreset::FlatSclera,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EyePreset::FlatCornea => "flat_cornea",
            EyePreset::Average => "average",
            EyePreset::SteepCornea => "steep_cornea",
            EyePreset::FlatSclera => "flat_sclera",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }

    /// (K_c, e^2, R_s, z_s, R_eye) in cm.
    ///
    /// The tabulated scleral centre heights are rounded to 1e-3 cm; the values
    /// here carry the extra digits implied by the tabulated `l4`, so that the
    /// limbus coefficients solved from them reproduce the table.
    pub fn parameters(self) -> (f64, f64, f64, f64, f64) {
        const Z_S_AVERAGE: f64 = -1.313_751;
        const Z_S_FLAT: f64 = -4.621_240;
        match self {
            EyePreset::FlatCornea => (0.785, 0.430, 1.2, Z_S_AVERAGE, 1.2),
            EyePreset::Average => (0.775, 0.320, 1.2, Z_S_AVERAGE, 1.2),
            EyePreset::SteepCornea => (0.765, 0.210, 1.2, Z_S_AVERAGE, 1.2),
            EyePreset::FlatSclera => (0.775, 0.320, 4.31, Z_S_FLAT, 1.2),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurfaceRegion {
    Cornea,
    Limbus,
    Sclera,
}

/// Gauss-Legendre 5-point nodes/weights on [-1, 1].
const GL5: [(f64, f64); 5] = [
    (0.0, 0.568_888_888_888_888_9),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
    (0.906_179_845_938_664, 0.236_926_885_056_189_1),
];

const ARC_TABLE_STEP: f64 = 0.005;

/// The piecewise ocular surface, plus an arc-length parametrisation of Γ_out
/// used by the mesher and by surface sampling.
#[derive(Debug, Clone)]
pub struct OcularSurface {
    pub cornea: CorneaParams,
    pub limbus: LimbusCoefficients,
    pub sclera: ScleraParams,
    arc_r: Vec<f64>,
    arc_s: Vec<f64>,
    theta_limbus_end: f64,
    theta_end: f64,
}

impl OcularSurface {
    pub fn preset(preset: EyePreset) -> Self {
        let (k_c, e2, r_s, z_s, r_eye) = preset.parameters();
        Self::from_parameters(k_c, e2, r_s, z_s, r_eye).expect("tabulated eye presets are valid")
    }

    pub fn from_parameters(k_c: f64, e2: f64, r_s: f64, z_s: f64, r_eye: f64) -> Result<Self> {
        let cornea = CorneaParams::new(k_c, e2)?;
        if !(r_s > 0.0) {
            return Err(Error::Geometry(format!("scleral radius must be positive, got {r_s}")));
        }
        if !(r_eye > LIMBUS_END && r_eye <= r_s) {
            return Err(Error::Geometry(format!(
                "domain radius R_eye = {r_eye} must satisfy {LIMBUS_END} < R_eye <= R_s = {r_s}"
            )));
        }
        let sclera = ScleraParams { r_s, z_s, r_eye };
        Self::new(cornea, sclera)
    }

    pub fn new(cornea: CorneaParams, sclera: ScleraParams) -> Result<Self> {
        let limbus = solve_limbus_coefficients(&cornea, &sclera)?;
        let mut surface = Self {
            cornea,
            limbus,
            sclera,
            arc_r: Vec::new(),
            arc_s: Vec::new(),
            theta_limbus_end: (LIMBUS_END / sclera.r_s).acos(),
            theta_end: (sclera.r_eye / sclera.r_s).min(1.0).acos(),
        };
        surface.check_monotone()?;
        surface.build_arc_table();
        Ok(surface)
    }

    fn check_monotone(&self) -> Result<()> {
        let n = 4000;
        let r_max = self.r_eye();
        let mut prev = self.h_unchecked(0.0);
        for i in 1..=n {
            let r = r_max * i as f64 / n as f64;
            let h = self.h_unchecked(r);
            if !(h < prev) {
                return Err(Error::Geometry(format!(
                    "ocular surface is not strictly decreasing near r = {r:.4} cm; \
                     cornea and sclera cannot be joined over [0.5, 0.7]"
                )));
            }
            prev = h;
        }
        Ok(())
    }

    fn build_arc_table(&mut self) {
        let n = (LIMBUS_END / ARC_TABLE_STEP).round() as usize;
        let mut arc_r = Vec::with_capacity(n + 1);
        let mut arc_s = Vec::with_capacity(n + 1);
        arc_r.push(0.0);
        arc_s.push(0.0);
        let mut s = 0.0;
        for i in 1..=n {
            let r0 = (i - 1) as f64 * ARC_TABLE_STEP;
            let r1 = i as f64 * ARC_TABLE_STEP;
            s += self.arc_between(r0, r1);
            arc_r.push(r1);
            arc_s.push(s);
        }
        self.arc_r = arc_r;
        self.arc_s = arc_s;
    }

    fn arc_between(&self, r0: f64, r1: f64) -> f64 {
        let half = 0.5 * (r1 - r0);
        let mid = 0.5 * (r1 + r0);
        GL5.iter()
            .map(|&(x, w)| {
                let d = self.eval_unchecked(mid + half * x)[1];
                w * (1.0 + d * d).sqrt()
            })
            .sum::<f64>()
            * half
    }

    pub fn r_eye(&self) -> f64 {
        self.sclera.r_eye
    }

    /// Height of the horizontal cut Γ_in,h.
    pub fn bottom_z(&self) -> f64 {
        self.h_unchecked(self.r_eye())
    }

    pub fn region(&self, r: f64) -> SurfaceRegion {
        if r < LIMBUS_START {
            SurfaceRegion::Cornea
        } else if r <= LIMBUS_END {
            SurfaceRegion::Limbus
        } else {
            SurfaceRegion::Sclera
        }
    }

    /// `(h, h', h'')` at `r`, rejecting points outside `[0, R_eye]`.
    pub fn eval(&self, r: f64) -> Result<[f64; 3]> {
        if !(0.0..=self.r_eye()).contains(&r) {
            return Err(Error::Domain {
                quantity: "r",
                value: r,
                min: 0.0,
                max: self.r_eye(),
            });
        }
        Ok(self.eval_unchecked(r))
    }

    pub(crate) fn eval_unchecked(&self, r: f64) -> [f64; 3] {
        match self.region(r) {
            SurfaceRegion::Cornea => self.cornea.eval(r),
            SurfaceRegion::Limbus => self.limbus.eval(r),
            SurfaceRegion::Sclera => self.sclera.eval(r),
        }
    }

    pub fn h_unchecked(&self, r: f64) -> f64 {
        self.eval_unchecked(r)[0]
    }

    pub fn slope_unchecked(&self, r: f64) -> f64 {
        self.eval_unchecked(r)[1]
    }

    /// Total arc length of Γ_out from the apex to (R_eye, h(R_eye)).
    pub fn arc_length(&self) -> f64 {
        self.limbus_end_arc() + self.sclera.r_s * (self.theta_limbus_end - self.theta_end)
    }

    fn limbus_end_arc(&self) -> f64 {
        *self.arc_s.last().unwrap()
    }

    /// Arc-length position of the surface point above radius `r`.
    pub fn arc_of_r(&self, r: f64) -> f64 {
        let r = r.clamp(0.0, self.r_eye());
        if r <= LIMBUS_END {
            let i = ((r / ARC_TABLE_STEP).floor() as usize).min(self.arc_r.len() - 2);
            self.arc_s[i] + self.arc_between(self.arc_r[i], r)
        } else {
            let theta = (r / self.sclera.r_s).min(1.0).acos();
            self.limbus_end_arc() + self.sclera.r_s * (self.theta_limbus_end - theta)
        }
    }

    /// Radius of the surface point at arc length `s` from the apex.
    pub fn r_of_arc(&self, s: f64) -> f64 {
        self.point_at_arc(s)[0]
    }

    /// Point `(r, z)` on Γ_out at arc length `s` (clamped to the curve).
    pub fn point_at_arc(&self, s: f64) -> [f64; 2] {
        let s = s.clamp(0.0, self.arc_length());
        let s_lim = self.limbus_end_arc();
        if s <= s_lim {
            let i = match self.arc_s.binary_search_by(|x| x.partial_cmp(&s).unwrap()) {
                Ok(i) => return [self.arc_r[i], self.h_unchecked(self.arc_r[i])],
                Err(i) => i - 1,
            };
            let (r0, r1) = (self.arc_r[i], self.arc_r[i + 1]);
            let (s0, s1) = (self.arc_s[i], self.arc_s[i + 1]);
            let mut r = r0 + (s - s0) / (s1 - s0) * (r1 - r0);
            for _ in 0..20 {
                let d = self.slope_unchecked(r);
                let f = s0 + self.arc_between(r0, r) - s;
                let step = f / (1.0 + d * d).sqrt();
                r = (r - step).clamp(r0, r1);
                if step.abs() < 1e-15 {
                    break;
                }
            }
            [r, self.h_unchecked(r)]
        } else {
            let theta = self.theta_limbus_end - (s - s_lim) / self.sclera.r_s;
            if s >= self.arc_length() {
                return [self.r_eye(), self.bottom_z()];
            }
            [
                self.sclera.r_s * theta.cos(),
                self.sclera.z_s + self.sclera.r_s * theta.sin(),
            ]
        }
    }

    /// Outward unit normal at arc length `s`.
    pub fn normal_at_arc(&self, s: f64) -> [f64; 2] {
        let s = s.clamp(0.0, self.arc_length());
        if s <= self.limbus_end_arc() {
            let r = self.r_of_arc(s);
            Self::normal_from_slope(self.slope_unchecked(r))
        } else {
            let theta = self.theta_limbus_end - (s - self.limbus_end_arc()) / self.sclera.r_s;
            [theta.cos(), theta.sin()]
        }
    }

    /// Outward unit normal above radius `r`.
    pub fn normal_at_r(&self, r: f64) -> [f64; 2] {
        if r <= LIMBUS_END {
            Self::normal_from_slope(self.slope_unchecked(r))
        } else {
            let p = [r, self.h_unchecked(r)];
            let d = [p[0], p[1] - self.sclera.z_s];
            let n = d[0].hypot(d[1]);
            [d[0] / n, d[1] / n]
        }
    }

    fn normal_from_slope(slope: f64) -> [f64; 2] {
        let n = (1.0 + slope * slope).sqrt();
        [-slope / n, 1.0 / n]
    }

    /// True when `(r, z)` lies in Ω up to `tol`.
    pub fn contains(&self, r: f64, z: f64, tol: f64) -> bool {
        r >= -tol
            && r <= self.r_eye() + tol
            && z >= self.bottom_z() - tol
            && z <= self.h_unchecked(r.clamp(0.0, self.r_eye())) + tol
    }

    /// Area of Ω (cm^2) by Gauss-Legendre quadrature of `h(r) - h(R_eye)`.
    pub fn domain_area(&self) -> f64 {
        let zb = self.bottom_z();
        let mut total = 0.0;
        let segments = [(0.0, LIMBUS_START), (LIMBUS_START, LIMBUS_END)];
        for (a, b) in segments {
            let n = 200;
            for k in 0..n {
                let r0 = a + (b - a) * k as f64 / n as f64;
                let r1 = a + (b - a) * (k + 1) as f64 / n as f64;
                let half = 0.5 * (r1 - r0);
                let mid = 0.5 * (r1 + r0);
                total += GL5
                    .iter()
                    .map(|&(x, w)| w * (self.h_unchecked(mid + half * x) - zb))
                    .sum::<f64>()
                    * half;
            }
        }
        // Circular segment: integral of z_s + sqrt(R^2 - r^2) - zb over [0.7, R_eye].
        let (rs, zs) = (self.sclera.r_s, self.sclera.z_s);
        let prim = |r: f64| {
            let q = (rs * rs - r * r).max(0.0).sqrt();
            0.5 * (r * q + rs * rs * (r / rs).clamp(-1.0, 1.0).asin()) + (zs - zb) * r
        };
        total + prim(self.r_eye()) - prim(LIMBUS_END)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn average_preset_reference_values() {
        let s = OcularSurface::preset(EyePreset::Average);
        assert!((s.cornea.k_c - 0.775).abs() < 1e-12);
        assert!((s.cornea.a_c - 0.639).abs() < 5e-4);
        assert!((s.cornea.b_c - 0.527).abs() < 5e-4);
        assert!((s.sclera.z_s - -1.314).abs() < 5e-4);
        assert_eq!(s.eval(0.0).unwrap()[0], 0.0);
    }

    #[test]
    fn limbus_coefficients_reproduce_table() {
        let table: [(EyePreset, [f64; 6]); 4] = [
            (
                EyePreset::FlatCornea,
                [25.902, 536.827, 6900.432, -42.384, 545.984, -5042.020],
            ),
            (
                EyePreset::Average,
                [24.847, 502.197, 6099.372, -42.384, 545.984, -5042.020],
            ),
            (
                EyePreset::SteepCornea,
                [24.349, 485.789, 5760.904, -42.384, 545.984, -5042.020],
            ),
            (
                EyePreset::FlatSclera,
                [24.847, 502.197, 6099.372, -46.058, 670.302, -6614.444],
            ),
        ];
        for (preset, expected) in table {
            let s = OcularSurface::preset(preset);
            for (i, (got, want)) in s.limbus.l.iter().zip(expected).enumerate() {
                // The tabulated l3 and l6 are off from exact curvature matching
                // by up to 4%; the value/slope coefficients are checked tightly
                // and curvature continuity is checked by the C2 test.
                if i == 2 || i == 5 {
                    assert!(((got - want) / want).abs() < 0.05, "{preset:?} l{}: {got}", i + 1);
                    continue;
                }
                let rel = ((got - want) / want).abs();
                assert!(rel < 1e-4, "{preset:?}: got {got}, want {want} (rel {rel:e})");
            }
        }
    }

    #[test]
    fn self_matching_jumps_vanish() {
        // A "limbus" equal to the cornea's own extension has zero jumps.
        let c = CorneaParams::new(0.775, 0.32).unwrap();
        let left = c.eval(LIMBUS_START - 1e-12);
        let right = c.eval(LIMBUS_START);
        for k in 0..3 {
            assert!((left[k] - right[k]).abs() < 1e-9);
        }
    }

    #[test]
    fn apex_curvature_and_rim() {
        let s = OcularSurface::preset(EyePreset::Average);
        let [h, d1, d2] = s.eval(0.0).unwrap();
        assert_eq!(h, 0.0);
        assert_eq!(d1, 0.0);
        assert!((d2 + 1.0 / 0.775).abs() < 1e-12);
        let rim = s.eval(1.2).unwrap()[0];
        assert!((rim - -1.314).abs() < 5e-4);
        assert!(s.eval(1.3).is_err());
        assert!(s.eval(-0.1).is_err());
    }

    #[test]
    fn breakpoints_are_c2() {
        for preset in EyePreset::ALL {
            let s = OcularSurface::preset(preset);
            let jumps = [
                (s.cornea.eval(LIMBUS_START), s.limbus.eval(LIMBUS_START)),
                (s.limbus.eval(LIMBUS_END), s.sclera.eval(LIMBUS_END)),
            ];
            for (left, right) in jumps {
                for k in 0..3 {
                    assert!((left[k] - right[k]).abs() < 1e-9, "{preset:?} k={k}");
                }
            }
        }
    }

    #[test]
    fn infeasible_geometry_is_rejected() {
        // Cornea too small to reach the limbus.
        assert!(OcularSurface::from_parameters(0.3, 0.32, 1.2, -1.3, 1.2).is_err());
        // Sclera positioned far above the cornea cannot be joined monotonically.
        assert!(OcularSurface::from_parameters(0.775, 0.32, 1.2, -0.5, 1.2).is_err());
        // Domain wider than the sclera.
        assert!(OcularSurface::from_parameters(0.775, 0.32, 1.0, -1.1, 1.2).is_err());
    }

    #[test]
    fn arc_length_roundtrip() {
        for preset in EyePreset::ALL {
            let s = OcularSurface::preset(preset);
            for i in 0..=60 {
                let r = s.r_eye() * i as f64 / 60.0;
                let arc = s.arc_of_r(r);
                let back = s.r_of_arc(arc);
                assert!((back - r).abs() < 1e-9, "{preset:?} r={r} back={back}");
                let p = s.point_at_arc(arc);
                assert!((p[1] - s.h_unchecked(p[0])).abs() < 1e-10);
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn slope_matches_difference_quotient(i in 0usize..4, r in 0.01f64..1.19) {
                let s = OcularSurface::preset(EyePreset::ALL[i]);
                let d = 1e-6;
                let fd = (s.h_unchecked(r + d) - s.h_unchecked(r - d)) / (2.0 * d);
                prop_assert!((fd - s.slope_unchecked(r)).abs() < 1e-6);
            }

            #[test]
            fn arc_length_round_trip(i in 0usize..4, r in 0.0f64..1.2) {
                let s = OcularSurface::preset(EyePreset::ALL[i]);
                prop_assert!((s.r_of_arc(s.arc_of_r(r)) - r).abs() < 1e-9);
            }

            #[test]
            fn normal_is_unit_and_outward(i in 0usize..4, r in 0.0f64..1.19) {
                let s = OcularSurface::preset(EyePreset::ALL[i]);
                let n = s.normal_at_r(r);
                prop_assert!((n[0].hypot(n[1]) - 1.0).abs() < 1e-12);
                prop_assert!(n[1] > 0.0);
                prop_assert!((n[0] + n[1] * s.slope_unchecked(r)).abs() < 1e-9);
            }
        }
    }
}
