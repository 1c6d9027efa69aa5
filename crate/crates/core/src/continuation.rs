//! Root continuation on the curve `f(x, y) = 0`: moving a group of
//! `x`-roots from one `y`-node to another, and connecting `x`-roots at `y₀`
//! to `y`-roots at `x₀` to read off each factor's bidegree.

use rug::{Float, Rational};

use crate::algebra::BivarPolyZ;
use crate::error::{Error, Result};
use crate::minpoly::RootGroup;
use crate::par::map_indexed;
use crate::rootsolve::{ApproxRoot, COINCIDENCE};
use crate::track::{track, Homotopy, TrackerConfig, C64};

/// Outcome of tracking one root along a continuation path.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePath {
    pub start: (C64, Rational),
    pub end: (C64, C64),
    pub gamma: C64,
    pub converged: bool,
}

/// `f` in doubles, coefficients scaled so the largest is below one.
/// `rows[i][j]` multiplies `x^i y^j`.
struct CurveF64 {
    rows: Vec<Vec<f64>>,
}

impl CurveF64 {
    fn new(f: &BivarPolyZ) -> Self {
        let bits = f.terms().values().map(|c| c.significant_bits()).max().unwrap_or(0);
        let mut rows = vec![vec![0.0; f.deg_y() + 1]; f.deg_x() + 1];
        for (&(i, j), c) in f.terms() {
            rows[i as usize][j as usize] = (Float::with_val(64, c) >> bits).to_f64();
        }
        CurveF64 { rows }
    }

    /// `(f, f_x, f_y)` at `(x, y)`.
    fn eval(&self, x: C64, y: C64) -> (C64, C64, C64) {
        let zero = C64::new(0.0, 0.0);
        let (mut v, mut vx, mut vy) = (zero, zero, zero);
        for row in self.rows.iter().rev() {
            let (mut q, mut dq) = (zero, zero);
            for &c in row.iter().rev() {
                dq = dq * y + q;
                q = q * y + c;
            }
            vx = vx * x + v;
            v = v * x + q;
            vy = vy * x + dq;
        }
        (v, vx, vy)
    }
}

fn rational_f64(q: &Rational) -> f64 {
    q.to_f64()
}

/// `x` moves while `y` follows `((1−t)y₀ + tγy₁)/((1−t) + tγ)`.
struct Transport {
    f: CurveF64,
    y0: C64,
    y1: C64,
    gamma: C64,
}

impl Transport {
    fn y(&self, t: f64) -> (C64, C64) {
        let d = (1.0 - t) + self.gamma * t;
        let y = ((1.0 - t) * self.y0 + self.gamma * self.y1 * t) / d;
        let dy = self.gamma * (self.y1 - self.y0) / (d * d);
        (y, dy)
    }
}

impl Homotopy<1> for Transport {
    fn residual(&self, z: &[C64; 1], t: f64) -> [C64; 1] {
        [self.f.eval(z[0], self.y(t).0).0]
    }
    fn jacobian(&self, z: &[C64; 1], t: f64) -> [[C64; 1]; 1] {
        [[self.f.eval(z[0], self.y(t).0).1]]
    }
    fn dt(&self, z: &[C64; 1], t: f64) -> [C64; 1] {
        let (y, dy) = self.y(t);
        [self.f.eval(z[0], y).2 * dy]
    }
}

fn endpoint_error(z: C64, last_step: f64) -> f64 {
    (4.0 * last_step).max(64.0 * f64::EPSILON * (1.0 + z.norm()))
}

/// Moves roots of `f(·, y₀)` to roots of `f(·, y₁)`. Output `i` is the end
/// of the path started at input `i`; the start multiplier comes from
/// `cfg.gamma()`. The returned bounds are estimates from the last Newton
/// correction; refine against `f(·, y₁)` before exact use.
pub fn transport_group(
    f: &BivarPolyZ,
    roots: &[ApproxRoot],
    y0: &Rational,
    y1: &Rational,
    cfg: &TrackerConfig,
) -> Result<Vec<ApproxRoot>> {
    cfg.validate()?;
    if y0 == y1 {
        return Ok(roots.to_vec());
    }
    let h = Transport {
        f: CurveF64::new(f),
        y0: C64::new(rational_f64(y0), 0.0),
        y1: C64::new(rational_f64(y1), 0.0),
        gamma: cfg.gamma(),
    };
    let ends = map_indexed(cfg.execution, roots, |_, r| track(&h, [r.to_c64()], cfg));
    let mut out = Vec::with_capacity(roots.len());
    for (r, end) in roots.iter().zip(ends) {
        let end = end?;
        out.push(ApproxRoot::from_c64(end.z[0], endpoint_error(end.z[0], end.last_step), r.path_index));
    }
    for i in 0..out.len() {
        for j in i + 1..out.len() {
            let (a, b) = (out[i].to_c64(), out[j].to_c64());
            if (a - b).norm() < COINCIDENCE * (1.0 + a.norm()) {
                return Err(Error::PathFailure(format!(
                    "transported roots {i} and {j} collide at y = {y1}"
                )));
            }
        }
    }
    Ok(out)
}

/// The line `a·x + b·y = c`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Line {
    a: C64,
    b: C64,
    c: C64,
}

impl Line {
    fn horizontal(y0: C64) -> Self {
        Line { a: C64::new(0.0, 0.0), b: C64::new(1.0, 0.0), c: y0 }
    }
    fn vertical(x0: C64) -> Self {
        Line { a: C64::new(1.0, 0.0), b: C64::new(0.0, 0.0), c: x0 }
    }
    fn eval(&self, z: &[C64; 2]) -> C64 {
        self.a * z[0] + self.b * z[1] - self.c
    }
}

/// `{f(x,y) = 0, (1−t)L₀(x,y) + tγL₁(x,y) = 0}`.
struct Connect<'a> {
    f: &'a CurveF64,
    from: Line,
    to: Line,
    gamma: C64,
}

impl Homotopy<2> for Connect<'_> {
    fn residual(&self, z: &[C64; 2], t: f64) -> [C64; 2] {
        let line = self.from.eval(z) * (1.0 - t) + self.gamma * self.to.eval(z) * t;
        [self.f.eval(z[0], z[1]).0, line]
    }
    fn jacobian(&self, z: &[C64; 2], t: f64) -> [[C64; 2]; 2] {
        let (_, fx, fy) = self.f.eval(z[0], z[1]);
        let g = self.gamma * t;
        [[fx, fy], [self.from.a * (1.0 - t) + g * self.to.a, self.from.b * (1.0 - t) + g * self.to.b]]
    }
    fn dt(&self, z: &[C64; 2], _t: f64) -> [C64; 2] {
        [C64::new(0.0, 0.0), -self.from.eval(z) + self.gamma * self.to.eval(z)]
    }
}

/// Roots of `f(s, slope·s + intercept)` and their grouping. Every point of
/// the curve on a generic slanted line is finite, so it can stand between
/// the horizontal and vertical lines when direct paths diverge.
#[derive(Debug, Clone)]
pub struct Section {
    pub slope: Rational,
    pub intercept: Rational,
    pub roots: Vec<ApproxRoot>,
    pub groups: Vec<RootGroup>,
}

impl Section {
    fn line(&self) -> Line {
        Line {
            a: C64::new(-rational_f64(&self.slope), 0.0),
            b: C64::new(1.0, 0.0),
            c: C64::new(rational_f64(&self.intercept), 0.0),
        }
    }
    fn point(&self, s: C64) -> [C64; 2] {
        [s, s * rational_f64(&self.slope) + rational_f64(&self.intercept)]
    }
}

/// Half the smallest pairwise distance, at least `COINCIDENCE`.
fn match_tolerance(pts: &[C64]) -> f64 {
    let mut tol = f64::INFINITY;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            tol = tol.min((pts[i] - pts[j]).norm() / 2.0);
        }
    }
    tol.max(COINCIDENCE)
}

fn nearest(pts: &[C64], tol: f64, z: C64) -> Option<usize> {
    pts.iter()
        .enumerate()
        .map(|(k, p)| (k, (p - z).norm()))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .filter(|&(_, dist)| dist <= tol)
        .map(|(k, _)| k)
}

/// Where one `x`-group's paths ended: the path used and the `y`-roots hit.
struct Hit {
    start: C64,
    end: [C64; 2],
    y_roots: Vec<usize>,
}

/// Tracks one representative of every `x`-group from `(x̃, y₀)` to
/// `(x₀, y*)`, matches `y*` to a `y`-group and stores
/// `(deg x-group, deg y-group)` into each `x`-group.
///
/// A factor's finite points on `y = y₀` may all run off to infinity on the
/// way. With a `section`, such a group is moved onto the slanted line
/// first, and every point of its section group is tracked on to `x = x₀`;
/// the `y`-degree is then the total size of the `y`-groups reached.
#[allow(clippy::too_many_arguments)]
pub fn detect_degrees(
    f: &BivarPolyZ,
    x_roots: &[ApproxRoot],
    x_groups: &mut [RootGroup],
    y_roots: &[ApproxRoot],
    y_groups: &[RootGroup],
    x0: &Rational,
    y0: &Rational,
    section: Option<&Section>,
    cfg: &TrackerConfig,
) -> Result<Vec<CurvePath>> {
    cfg.validate()?;
    let curve = CurveF64::new(f);
    let gamma = cfg.gamma();
    let (x0c, y0c) = (C64::new(rational_f64(x0), 0.0), C64::new(rational_f64(y0), 0.0));
    let (horizontal, vertical) = (Line::horizontal(y0c), Line::vertical(x0c));
    let direct = Connect { f: &curve, from: horizontal, to: vertical, gamma };
    let ys: Vec<C64> = y_roots.iter().map(ApproxRoot::to_c64).collect();
    let tol = match_tolerance(&ys);

    let via_section = |sec: &Section, starts: &[usize]| -> Result<Hit> {
        let ss: Vec<C64> = sec.roots.iter().map(ApproxRoot::to_c64).collect();
        let s_tol = match_tolerance(&ss);
        let onto = Connect { f: &curve, from: horizontal, to: sec.line(), gamma };
        let mut landed = None;
        for &i in starts {
            let x = x_roots[i].to_c64();
            if let Ok(end) = track(&onto, [x, y0c], cfg) {
                if let Some(k) = nearest(&ss, s_tol, end.z[0]) {
                    landed = Some((x, k));
                    break;
                }
            }
        }
        let (start, k) = landed.ok_or_else(|| Error::UnmatchedEndpoint("no path reached the section".into()))?;
        let group = sec
            .groups
            .iter()
            .find(|g| g.root_indices.contains(&k))
            .ok_or_else(|| Error::UnmatchedEndpoint(format!("section root {k} is in no group")))?;
        let off = Connect { f: &curve, from: sec.line(), to: vertical, gamma };
        let mut hit = Hit { start, end: [x0c, C64::new(f64::NAN, 0.0)], y_roots: Vec::new() };
        for &r in &group.root_indices {
            let Ok(end) = track(&off, sec.point(ss[r]), cfg) else { continue };
            if let Some(k) = nearest(&ys, tol, end.z[1]) {
                if hit.y_roots.is_empty() {
                    hit.end = end.z;
                }
                if !hit.y_roots.contains(&k) {
                    hit.y_roots.push(k);
                }
            }
        }
        if hit.y_roots.is_empty() {
            return Err(Error::UnmatchedEndpoint("no section path reached x = x0".into()));
        }
        Ok(hit)
    };

    let found = map_indexed(cfg.execution, x_groups, |_, g| {
        let mut last = Error::UnmatchedEndpoint("empty group".into());
        for &i in &g.root_indices {
            let x = x_roots[i].to_c64();
            match track(&direct, [x, y0c], cfg) {
                Ok(end) => match nearest(&ys, tol, end.z[1]) {
                    Some(k) => return Ok(Hit { start: x, end: end.z, y_roots: vec![k] }),
                    None => {
                        last = Error::UnmatchedEndpoint(format!("endpoint y = {} matches no root", end.z[1]))
                    }
                },
                Err(e) => last = e,
            }
        }
        match section {
            Some(sec) => via_section(sec, &g.root_indices),
            None => Err(last),
        }
    });

    let mut claimed = vec![false; y_groups.len()];
    let mut paths = Vec::with_capacity(x_groups.len());
    for (gi, item) in found.into_iter().enumerate() {
        let hit = item?;
        let mut b = 0;
        let mut seen = Vec::new();
        for &k in &hit.y_roots {
            let gj = y_groups
                .iter()
                .position(|g| g.root_indices.contains(&k))
                .ok_or_else(|| Error::UnmatchedEndpoint(format!("root {k} is in no y-group")))?;
            if seen.contains(&gj) {
                continue;
            }
            seen.push(gj);
            if std::mem::replace(&mut claimed[gj], true) {
                return Err(Error::UnmatchedEndpoint(format!("y-group {gj} reached twice")));
            }
            b += y_groups[gj].min_poly.deg();
        }
        x_groups[gi].degree_pair = Some((x_groups[gi].min_poly.deg(), b));
        paths.push(CurvePath {
            start: (hit.start, y0.clone()),
            end: (hit.end[0], hit.end[1]),
            gamma,
            converged: true,
        });
    }
    let (sx, sy) = x_groups.iter().fold((0, 0), |(a, b), g| {
        let (da, db) = g.degree_pair.unwrap_or((0, 0));
        (a + da, b + db)
    });
    if sx != f.deg_x() || sy != f.deg_y() {
        return Err(Error::InconsistentGrouping(format!(
            "bidegrees sum to ({sx}, {sy}) for a polynomial of bidegree ({}, {})",
            f.deg_x(),
            f.deg_y()
        )));
    }
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{height_bound, primitive_from_rational, Var};
    use crate::minpoly::group_roots;
    use crate::rootsolve::solve_univariate;

    fn q(n: i64, d: u64) -> Rational {
        Rational::from((n, d))
    }

    fn circle() -> BivarPolyZ {
        BivarPolyZ::from_i64_terms(&[(2, 0, 1), (0, 2, 1), (0, 0, -1)])
    }

    fn roots_c64(v: &[f64]) -> Vec<ApproxRoot> {
        v.iter().enumerate().map(|(k, &x)| ApproxRoot::from_c64(C64::new(x, 0.0), 1e-15, k)).collect()
    }

    fn sorted(v: &[ApproxRoot]) -> Vec<C64> {
        let mut out: Vec<C64> = v.iter().map(ApproxRoot::to_c64).collect();
        out.sort_by(|a, b| (a.re + a.im).total_cmp(&(b.re + b.im)));
        out
    }

    #[test]
    fn circle_real_to_real() {
        let out = transport_group(&circle(), &roots_c64(&[1.0, -1.0]), &q(0, 1), &q(1, 2), &TrackerConfig::default())
            .unwrap();
        let s = 3f64.sqrt() / 2.0;
        let got = sorted(&out);
        assert!((got[0] - C64::new(-s, 0.0)).norm() < 1e-12);
        assert!((got[1] - C64::new(s, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn circle_real_to_complex() {
        let r = 792f64.sqrt() / 101.0;
        let out = transport_group(&circle(), &roots_c64(&[r, -r]), &q(97, 101), &q(104, 101), &TrackerConfig::default())
            .unwrap();
        let i = 615f64.sqrt() / 101.0;
        let got = sorted(&out);
        assert!((got[0] - C64::new(0.0, -i)).norm() < 1e-12);
        assert!((got[1] - C64::new(0.0, i)).norm() < 1e-12);
    }

    #[test]
    fn identity_path() {
        let r = roots_c64(&[0.25, -0.5]);
        let out = transport_group(&circle(), &r, &q(1, 3), &q(1, 3), &TrackerConfig::default()).unwrap();
        assert_eq!(out, r);
    }

    #[test]
    fn round_trip() {
        let cfg = TrackerConfig::default();
        let start = roots_c64(&[0.6, -0.6]);
        let there = transport_group(&circle(), &start, &q(4, 5), &q(6, 5), &cfg).unwrap();
        let back = transport_group(&circle(), &there, &q(6, 5), &q(4, 5), &cfg.with_gamma_angle(-cfg.gamma_angle))
            .unwrap();
        for (a, b) in start.iter().zip(&back) {
            assert!((a.to_c64() - b.to_c64()).norm() < 1e-12);
        }
    }

    #[test]
    fn collision_is_reported() {
        // both roots meet at x = 0 when y = 1
        let err = transport_group(&circle(), &roots_c64(&[0.6, -0.6]), &q(4, 5), &q(1, 1), &TrackerConfig::default());
        assert!(matches!(err, Err(Error::PathFailure(_))));
    }

    fn groups_at(f: &BivarPolyZ, var: Var, at: &Rational) -> (Vec<ApproxRoot>, Vec<RootGroup>) {
        let p = primitive_from_rational(&f.specialize(var, at)).unwrap();
        let h = height_bound(&p);
        let bits = crate::minpoly::required_bits(p.deg(), &h) + 16;
        let roots = solve_univariate(&p, &TrackerConfig::default(), bits).unwrap();
        let groups = group_roots(&roots, p.deg(), &h).unwrap();
        (roots, groups)
    }

    fn degrees(f: &BivarPolyZ, x0: Rational, y0: Rational) -> Vec<(usize, usize)> {
        let (xr, mut xg) = groups_at(f, Var::Y, &y0);
        let (yr, yg) = groups_at(f, Var::X, &x0);
        detect_degrees(f, &xr, &mut xg, &yr, &yg, &x0, &y0, None, &TrackerConfig::default()).unwrap();
        let mut d: Vec<(usize, usize)> = xg.iter().map(|g| g.degree_pair.unwrap()).collect();
        d.sort();
        d
    }

    #[test]
    fn degrees_of_circle_times_hyperbola() {
        let hyper = BivarPolyZ::from_i64_terms(&[(1, 1, 1), (0, 0, -2)]);
        let f = circle().mul(&hyper);
        assert_eq!(degrees(&f, q(113, 101), q(97, 101)), vec![(1, 1), (2, 2)]);
    }

    #[test]
    fn degrees_of_line_times_parabola() {
        let line = BivarPolyZ::from_i64_terms(&[(1, 0, 1), (0, 1, 1)]);
        let parabola = BivarPolyZ::from_i64_terms(&[(2, 0, 1), (0, 1, 1), (0, 0, -1)]);
        let f = line.mul(&parabola);
        assert_eq!(degrees(&f, q(71, 101), q(130, 101)), vec![(1, 1), (2, 1)]);
    }

    #[test]
    fn degrees_of_irreducible() {
        let f = BivarPolyZ::from_i64_terms(&[(3, 0, 1), (0, 2, 1), (1, 1, 1), (0, 0, -3)]);
        assert_eq!(degrees(&f, q(88, 101), q(150, 101)), vec![(3, 2)]);
    }

    #[test]
    fn diverging_group_goes_through_a_section() {
        let a = BivarPolyZ::from_i64_terms(&[(1, 1, 7), (0, 0, 2)]);
        let b = BivarPolyZ::from_i64_terms(&[(2, 1, 8), (1, 2, -1), (1, 0, -2), (0, 3, 9), (0, 2, -6), (0, 0, 1)]);
        let f = a.mul(&b);
        let (x0, y0) = (q(179, 101), q(51, 101));
        let (xr, mut xg) = groups_at(&f, Var::Y, &y0);
        let (yr, yg) = groups_at(&f, Var::X, &x0);
        let (slope, intercept) = (q(131, 101), q(-27, 101));
        let line = primitive_from_rational(&f.restrict_to_line(&slope, &intercept)).unwrap();
        assert_eq!(line.deg(), 5);
        let h = height_bound(&line);
        let bits = crate::minpoly::required_bits(line.deg(), &h) + 16;
        let roots = solve_univariate(&line, &TrackerConfig::default(), bits).unwrap();
        let groups = group_roots(&roots, line.deg(), &h).unwrap();
        let sec = Section { slope, intercept, roots, groups };
        let cfg = TrackerConfig::default();
        detect_degrees(&f, &xr, &mut xg, &yr, &yg, &x0, &y0, Some(&sec), &cfg).unwrap();
        let mut d: Vec<(usize, usize)> = xg.iter().map(|g| g.degree_pair.unwrap()).collect();
        d.sort();
        assert_eq!(d, vec![(1, 1), (2, 3)]);
    }
}
