//! End-to-end factorization: reduction, base-node grouping, degree
//! detection, continuation to fresh nodes, exact interpolation and an exact
//! verification gate.

mod output;
mod parse;
mod reduce;
mod sample;

use std::time::Instant;

use rug::{Integer, Rational};
use serde::Serialize;

use crate::algebra::{
    exact_divide, height_bound, mp, primitive_from_rational, BivarPolyZ, UniPolyZ, Var,
};
use crate::continuation::{detect_degrees, transport_group, Section};
use crate::error::{Error, Recovery, Result};
use crate::interpolate::{
    assemble_factor, node_polynomial, required_nodes, rounding_threshold, scaling_constants, NodeRecord,
    ScalingSystem,
};
use crate::minpoly::{group_roots, required_bits, RootGroup};
use crate::rootsolve::{newton_refine, solve_univariate, ApproxRoot, TrackerConfig};

pub use output::{read_factorization, to_json, to_text};
pub use parse::parse_poly;
pub use reduce::{reduce_input, Reduced};
pub use sample::{Sampler, NODE_DENOM};

/// Knobs of [`factorize`].
#[derive(Debug, Clone, PartialEq)]
pub struct FactorOptions {
    pub seed: u64,
    pub max_restarts: usize,
    /// Ceiling on any requested root accuracy, in bits.
    pub max_bits: u32,
    /// Exchange `x` and `y` for parts whose `x`-degree is below their
    /// `y`-degree.
    pub swap_vars: bool,
    /// Use this `y₀` on the first attempt instead of sampling one.
    pub base_node: Option<Rational>,
    pub tracker: TrackerConfig,
}

impl Default for FactorOptions {
    fn default() -> Self {
        FactorOptions {
            seed: 0,
            max_restarts: 5,
            max_bits: 65_536,
            swap_vars: false,
            base_node: None,
            tracker: TrackerConfig::default(),
        }
    }
}

/// Per-factor reconstruction record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorStats {
    pub degree_pair: [usize; 2],
    /// Rank of the node-coefficient matrix.
    pub rank: usize,
    /// Lower bound on the number of extra nodes.
    pub mu: usize,
    /// Nodes used, including `y₀`.
    pub nodes: usize,
}

/// What happened while factoring one square-free part.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Default)]
pub struct PartTranscript {
    pub degree_pair: [usize; 2],
    pub swapped: bool,
    pub restarts: usize,
    pub y0: String,
    pub x0: String,
    pub min_polys: Vec<String>,
    pub group_sizes: Vec<usize>,
    pub degree_pairs: Vec<[usize; 2]>,
    pub factors: Vec<FactorStats>,
    pub bits: u32,
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct Stats {
    pub retries: usize,
    /// Largest root accuracy requested, in bits.
    pub max_bits_used: u32,
    pub parts: Vec<PartTranscript>,
    pub wall_time_ms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FactorizationResult {
    pub content: Integer,
    /// Primitive factors with positive leading coefficient, canonically
    /// sorted, with multiplicities.
    pub factors: Vec<(BivarPolyZ, usize)>,
    pub stats: Stats,
    pub seed: u64,
}

impl FactorizationResult {
    pub fn product(&self) -> BivarPolyZ {
        self.factors
            .iter()
            .fold(BivarPolyZ::constant(self.content.clone()), |acc, (f, k)| acc.mul(&f.pow(*k)))
    }
}

/// `content · Π fᵢ^kᵢ == f` exactly.
pub fn verify(f: &BivarPolyZ, result: &FactorizationResult) -> bool {
    result.product() == *f
}

/// Factors `f` over ℚ. Every returned result has passed [`verify`].
pub fn factorize(f: &BivarPolyZ, opts: &FactorOptions) -> Result<FactorizationResult> {
    let started = Instant::now();
    opts.tracker.validate()?;
    let red = reduce_input(f)?;
    let mut run = Run { opts, sampler: Sampler::new(opts.seed), stats: Stats::default() };
    let mut factors = Vec::new();
    let (a, b) = red.monomial;
    if a > 0 {
        factors.push((BivarPolyZ::x(), a as usize));
    }
    if b > 0 {
        factors.push((BivarPolyZ::y(), b as usize));
    }
    for (u, k) in &red.univariate {
        factors.extend(run.univariate(u)?.into_iter().map(|g| (g, *k)));
    }
    for (part, k) in &red.parts {
        factors.extend(run.part(part)?.into_iter().map(|g| (g, *k)));
    }
    factors.sort_by(|x, y| x.0.canonical_cmp(&y.0).then(x.1.cmp(&y.1)));
    let mut stats = run.stats;
    stats.wall_time_ms = started.elapsed().as_secs_f64() * 1e3;
    let result = FactorizationResult { content: red.content, factors, stats, seed: opts.seed };
    if !verify(f, &result) {
        return Err(Error::FactorizationFailed {
            restarts: 0,
            diagnostics: "factor product does not reproduce the input".into(),
        });
    }
    Ok(result)
}

/// Bits of accuracy that let `group_roots` run on a degree-`d` polynomial
/// with height bound `h`.
fn grouping_bits(d: usize, h: &Integer) -> u32 {
    required_bits(d, h) + mp::log2_ceil_at_least_one(&mp::bound(12.0 * d as f64)) + 4
}

/// Primitive specialization of `f` at `var = at`, if it keeps full degree
/// in the other variable and is square-free.
fn admissible(f: &BivarPolyZ, var: Var, at: &Rational) -> Option<UniPolyZ> {
    let full = match var {
        Var::X => f.deg_y(),
        Var::Y => f.deg_x(),
    };
    let p = primitive_from_rational(&f.specialize(var, at)).ok()?;
    (p.deg() == full && p.is_squarefree()).then_some(p)
}

const NODE_TRIES: usize = 64;

/// One group's roots at the base node.
struct Base<'a> {
    f: &'a BivarPolyZ,
    y0: &'a Rational,
    roots: Vec<ApproxRoot>,
    pair: (usize, usize),
}

/// Admissible nodes shared by all factors of one part, in sampling order.
struct NodePool {
    nodes: Vec<(Rational, UniPolyZ)>,
}

struct Run<'a> {
    opts: &'a FactorOptions,
    sampler: Sampler,
    stats: Stats,
}

impl Run<'_> {
    fn tracker(&mut self) -> TrackerConfig {
        self.opts.tracker.with_gamma_angle(self.sampler.sample_angle())
    }

    fn check_bits(&mut self, bits: u32) -> Result<()> {
        if bits > self.opts.max_bits {
            return Err(Error::PrecisionTooLow(format!("{bits} bits exceed the limit of {}", self.opts.max_bits)));
        }
        self.stats.max_bits_used = self.stats.max_bits_used.max(bits);
        Ok(())
    }

    fn sample_node(&mut self, f: &BivarPolyZ, var: Var, avoid: &[Rational]) -> Result<(Rational, UniPolyZ)> {
        for _ in 0..NODE_TRIES {
            let r = self.sampler.sample_rational();
            if avoid.contains(&r) {
                continue;
            }
            if let Some(p) = admissible(f, var, &r) {
                return Ok((r, p));
            }
        }
        Err(Error::Inconsistent("no admissible specialization node found".into()))
    }

    /// Roots of `p` and their grouping, escalating precision on refine
    /// errors and resampling the start angle on path failures.
    fn solve_and_group(&mut self, p: &UniPolyZ, scale: u32) -> Result<(Vec<ApproxRoot>, Vec<RootGroup>)> {
        let h = height_bound(p);
        let mut bits = grouping_bits(p.deg(), &h) * scale;
        let mut last = Error::NotConverging;
        for _ in 0..3 {
            self.check_bits(bits)?;
            let cfg = self.tracker();
            let attempt = solve_univariate(p, &cfg, bits).and_then(|r| {
                let g = group_roots(&r, p.deg(), &h)?;
                Ok((r, g))
            });
            match attempt {
                Ok(out) => return Ok(out),
                Err(e) => {
                    log::debug!("root grouping failed: {e}");
                    self.stats.retries += 1;
                    if e.recovery() == Recovery::Refine {
                        bits *= 2;
                    }
                    last = e;
                }
            }
        }
        Err(last)
    }

    /// Grouped points of `f` on a sampled line `y = slope·x + intercept`
    /// meeting the curve in `total degree` distinct finite points.
    fn section(&mut self, f: &BivarPolyZ, scale: u32) -> Result<Section> {
        let total = f.terms().keys().map(|&(i, j)| (i + j) as usize).max().unwrap_or(0);
        for _ in 0..NODE_TRIES {
            let slope = self.sampler.sample_rational();
            let intercept = self.sampler.sample_rational() - Rational::from(1);
            let Ok(p) = primitive_from_rational(&f.restrict_to_line(&slope, &intercept)) else { continue };
            if p.deg() != total || !p.is_squarefree() {
                continue;
            }
            let (roots, groups) = self.solve_and_group(&p, scale)?;
            return Ok(Section { slope, intercept, roots, groups });
        }
        Err(Error::Inconsistent("no admissible section line found".into()))
    }

    fn univariate(&mut self, u: &BivarPolyZ) -> Result<Vec<BivarPolyZ>> {
        let var = if u.involves(Var::X) { Var::X } else { Var::Y };
        let p = u.to_univariate(var).ok_or_else(|| Error::Inconsistent("expected one variable".into()))?;
        if p.deg() <= 1 {
            return Ok(vec![u.clone()]);
        }
        let mut diagnostics = Vec::new();
        for attempt in 0..=self.opts.max_restarts {
            let scale = 1u32 << attempt.min(16);
            match self.solve_and_group(&p, scale) {
                Ok((_, groups)) => {
                    let prod = groups.iter().fold(UniPolyZ::one(), |acc, g| &acc * &g.min_poly);
                    if prod == p {
                        return Ok(groups.iter().map(|g| BivarPolyZ::from_univariate(&g.min_poly, var)).collect());
                    }
                    diagnostics.push("group polynomials do not multiply back".to_string());
                }
                Err(e) => diagnostics.push(e.to_string()),
            }
            self.stats.retries += 1;
        }
        Err(Error::FactorizationFailed { restarts: self.opts.max_restarts, diagnostics: diagnostics.join("; ") })
    }

    fn part(&mut self, f: &BivarPolyZ) -> Result<Vec<BivarPolyZ>> {
        let swapped = self.opts.swap_vars && f.deg_x() < f.deg_y();
        let work = if swapped { f.swap_vars() } else { f.clone() };
        let mut transcript = PartTranscript { degree_pair: f.degree_pair(), swapped, ..Default::default() };
        for attempt in 0..=self.opts.max_restarts {
            transcript.restarts = attempt;
            let scale = 1u32 << attempt.min(16);
            match self.attempt(&work, attempt, scale, &mut transcript) {
                Ok(factors) => {
                    self.stats.parts.push(transcript);
                    if !swapped {
                        return Ok(factors);
                    }
                    return factors.iter().map(|g| g.swap_vars().primitive()).collect();
                }
                Err(e) => {
                    log::debug!("attempt {attempt} failed: {e}");
                    transcript.diagnostics.push(e.to_string());
                    self.stats.retries += 1;
                }
            }
        }
        let diagnostics = transcript.diagnostics.join("; ");
        self.stats.parts.push(transcript);
        Err(Error::FactorizationFailed { restarts: self.opts.max_restarts, diagnostics })
    }

    fn attempt(
        &mut self,
        f: &BivarPolyZ,
        attempt: usize,
        scale: u32,
        tr: &mut PartTranscript,
    ) -> Result<Vec<BivarPolyZ>> {
        let (m, n) = (f.deg_x(), f.deg_y());
        let pinned = self.opts.base_node.as_ref().filter(|_| attempt == 0);
        let (y0, fy0) = match pinned.and_then(|y| admissible(f, Var::Y, y).map(|p| (y.clone(), p))) {
            Some(node) => node,
            None => self.sample_node(f, Var::Y, &[])?,
        };
        let (x0, fx0) = self.sample_node(f, Var::X, &[])?;
        tr.y0 = y0.to_string();
        tr.x0 = x0.to_string();
        tr.bits = grouping_bits(m, &height_bound(&fy0)) * scale;

        let (x_roots, mut x_groups) = self.solve_and_group(&fy0, scale)?;
        tr.min_polys = x_groups.iter().map(|g| g.min_poly.to_string()).collect();
        tr.group_sizes = x_groups.iter().map(|g| g.root_indices.len()).collect();
        if x_groups.len() == 1 {
            tr.degree_pairs = vec![[m, n]];
            tr.factors = vec![FactorStats { degree_pair: [m, n], rank: 0, mu: 0, nodes: 1 }];
            return Ok(vec![f.clone()]);
        }
        let (y_roots, y_groups) = self.solve_and_group(&fx0, scale)?;

        let mut detected = Err(Error::NotConverging);
        let mut section = None;
        for _ in 0..3 {
            let cfg = self.tracker();
            detected =
                detect_degrees(f, &x_roots, &mut x_groups, &y_roots, &y_groups, &x0, &y0, section.as_ref(), &cfg);
            match &detected {
                Err(e) if e.recovery() == Recovery::Resample => {
                    log::debug!("degree detection failed: {e}");
                    self.stats.retries += 1;
                    if section.is_none() {
                        section = Some(self.section(f, scale)?);
                    }
                }
                _ => break,
            }
        }
        detected?;
        tr.degree_pairs = x_groups
            .iter()
            .map(|g| g.degree_pair.map_or([0, 0], |(a, b)| [a, b]))
            .collect();

        let mut pool = NodePool { nodes: Vec::new() };
        let mut factors = Vec::with_capacity(x_groups.len());
        tr.factors.clear();
        for g in &x_groups {
            let pair = g.degree_pair.ok_or_else(|| Error::Inconsistent("group without bidegree".into()))?;
            let base = Base {
                f,
                y0: &y0,
                roots: g.root_indices.iter().map(|&i| x_roots[i].clone()).collect(),
                pair,
            };
            let first = NodeRecord { y: y0.clone(), node_poly: g.min_poly.clone(), alpha_used: fy0.lc() };
            let (factor, fs) = self.reconstruct(&base, first, &mut pool, scale)?;
            tr.factors.push(fs);
            factors.push(factor);
        }
        let product = factors.iter().fold(BivarPolyZ::one(), |acc, g| acc.mul(g));
        if product != *f {
            return Err(Error::Inconsistent("factors do not multiply back to the part".into()));
        }
        Ok(factors)
    }

    /// Node `j` of the pool, sampling a new admissible one if needed.
    fn pool_node(&mut self, f: &BivarPolyZ, y0: &Rational, pool: &mut NodePool, j: usize) -> Result<(Rational, UniPolyZ)> {
        while pool.nodes.len() <= j {
            let mut avoid: Vec<Rational> = pool.nodes.iter().map(|(y, _)| y.clone()).collect();
            avoid.push(y0.clone());
            let node = self.sample_node(f, Var::Y, &avoid)?;
            pool.nodes.push(node);
        }
        Ok(pool.nodes[j].clone())
    }

    /// Node polynomial of the group at `y` by continuation from `y₀`.
    fn node_record(&mut self, base: &Base, y: &Rational, fy: &UniPolyZ, scale: u32) -> Result<NodeRecord> {
        let cfg = self.tracker();
        let moved = transport_group(base.f, &base.roots, base.y0, y, &cfg)?;
        let alpha = fy.lc();
        let r_mag = moved
            .iter()
            .map(|r| mp::bound(r.to_c64().norm() + 1.0))
            .fold(mp::bound(1.0), |a, b| a.max(&b));
        let delta = rounding_threshold(base.pair.0, &r_mag, &alpha);
        let bits = (mp::log2_ceil_at_least_one(&delta.recip()) + 16) * scale;
        self.check_bits(bits)?;
        let refined = moved
            .iter()
            .map(|r| newton_refine(fy, r, bits))
            .collect::<Result<Vec<_>>>()?;
        let poly = node_polynomial(&refined, &alpha)?;
        if poly.deg() != base.pair.0 || fy.div_exact_poly(&poly).is_none() {
            return Err(Error::PathFailure(format!("transported group does not divide F(x, {y})")));
        }
        Ok(NodeRecord { y: y.clone(), node_poly: poly, alpha_used: alpha })
    }

    fn reconstruct(
        &mut self,
        base: &Base,
        first: NodeRecord,
        pool: &mut NodePool,
        scale: u32,
    ) -> Result<(BivarPolyZ, FactorStats)> {
        let (a, b) = base.pair;
        if a == 0 || b == 0 {
            return Err(Error::Inconsistent(format!("bidegree ({a}, {b}) for a bivariate factor")));
        }
        let mut records = vec![first];
        let mut next = 0usize;
        let mut skipped = 0usize;
        let mut add_node = |run: &mut Self, records: &mut Vec<NodeRecord>| -> Result<()> {
            loop {
                let (y, fy) = run.pool_node(base.f, base.y0, pool, next)?;
                next += 1;
                match run.node_record(base, &y, &fy, scale) {
                    Ok(rec) => {
                        records.push(rec);
                        return Ok(());
                    }
                    Err(e) if e.recovery() != Recovery::Restart && skipped < NODE_TRIES => {
                        log::debug!("node {y} rejected: {e}");
                        run.stats.retries += 1;
                        skipped += 1;
                    }
                    Err(e) => return Err(e),
                }
            }
        };
        while records.len() <= b {
            add_node(self, &mut records)?;
        }
        let (lambda, rank, mu) = loop {
            let sys = ScalingSystem::from_records(&records, b);
            let rank = sys.rank();
            let mu = required_nodes(rank, b)?;
            if sys.k() < mu {
                add_node(self, &mut records)?;
                continue;
            }
            match scaling_constants(&sys) {
                Ok(l) => break (l, rank, mu),
                Err(Error::NeedMoreNodes) if sys.k() < 2 * b => add_node(self, &mut records)?,
                Err(Error::NeedMoreNodes) => {
                    return Err(Error::Inconsistent(format!("scaling system still underdetermined with {} nodes", 2 * b)))
                }
                Err(e) => return Err(e),
            }
        };
        let sys = ScalingSystem::from_records(&records, b);
        let g = assemble_factor(&sys, &lambda)?;
        if g.degree_pair() != [a, b] {
            return Err(Error::Inconsistent(format!(
                "assembled factor has bidegree {:?}, expected ({a}, {b})",
                g.degree_pair()
            )));
        }
        exact_divide(base.f, &g)?;
        let stats = FactorStats { degree_pair: [a, b], rank, mu, nodes: records.len() };
        Ok((g, stats))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> BivarPolyZ {
        parse_poly(s).unwrap()
    }

    fn factor_set(r: &FactorizationResult) -> Vec<(String, usize)> {
        r.factors.iter().map(|(f, k)| (f.to_string(), *k)).collect()
    }

    #[test]
    fn worked_example() {
        let f = p("(x*y-2)*(x^2+y^2-1)");
        let r = factorize(&f, &FactorOptions::default()).unwrap();
        assert!(verify(&f, &r));
        assert_eq!(factor_set(&r), vec![("x*y - 2".into(), 1), ("x^2 + y^2 - 1".into(), 1)]);
    }

    #[test]
    fn pinned_base_node_transcript() {
        let f = p("(x*y-2)*(x^2+y^2-1)");
        let opts = FactorOptions { base_node: Some(Rational::from((97, 101))), ..Default::default() };
        let r = factorize(&f, &opts).unwrap();
        let t = &r.stats.parts[0];
        assert_eq!(t.y0, "97/101");
        let mut polys = t.min_polys.clone();
        polys.sort();
        assert_eq!(polys, vec!["10201*x^2 - 792", "97*x - 202"]);
        let mut mus: Vec<(usize, [usize; 2])> = t.factors.iter().map(|s| (s.mu, s.degree_pair)).collect();
        mus.sort();
        assert_eq!(mus, vec![(2, [1, 1]), (4, [2, 2])]);
    }

    #[test]
    fn irreducible_circle() {
        let f = p("x^2+y^2-1");
        let r = factorize(&f, &FactorOptions::default()).unwrap();
        assert_eq!(factor_set(&r), vec![("x^2 + y^2 - 1".into(), 1)]);
    }

    #[test]
    fn monomial_only() {
        let r = factorize(&p("x^2*y^2"), &FactorOptions::default()).unwrap();
        assert_eq!(r.content, 1);
        assert_eq!(factor_set(&r), vec![("y".into(), 2), ("x".into(), 2)]);
    }

    #[test]
    fn content_univariate_and_multiplicity() {
        let f = p("-6*x*(y^2-2)*(x*y-2)^2*(x-3)*(x+1)");
        let r = factorize(&f, &FactorOptions::default()).unwrap();
        assert_eq!(r.content, -6);
        assert!(verify(&f, &r));
        assert_eq!(r.factors.len(), 5);
    }

    #[test]
    fn swapped_variables() {
        let f = p("(x+y^2)*(x*y^2-3)");
        let opts = FactorOptions { swap_vars: true, ..Default::default() };
        let r = factorize(&f, &opts).unwrap();
        assert!(r.stats.parts[0].swapped);
        assert_eq!(r.factors.len(), 2);
        assert!(verify(&f, &r));
    }

    #[test]
    fn verify_rejects_bad_results() {
        let f = p("(x*y-2)*(x^2+y^2-1)");
        let r = factorize(&f, &FactorOptions::default()).unwrap();
        let mut missing = r.clone();
        missing.factors.pop();
        assert!(!verify(&f, &missing));
        let mut negated = r.clone();
        negated.factors[0].0 = negated.factors[0].0.neg();
        assert!(!verify(&f, &negated));
    }

    #[test]
    fn deterministic_for_a_seed() {
        let f = p("(x^2*y+3*x-y)*(x+y+1)*(x^2-y^3+2)");
        let opts = FactorOptions { seed: 11, ..Default::default() };
        let mut a = factorize(&f, &opts).unwrap();
        let mut b = factorize(&f, &opts).unwrap();
        a.stats.wall_time_ms = 0.0;
        b.stats.wall_time_ms = 0.0;
        assert_eq!(a, b);
        assert_eq!(a.factors.len(), 3);
    }

    #[test]
    fn impossible_precision_fails_cleanly() {
        let f = p("(x*y-2)*(x^2+y^2-1)");
        let opts = FactorOptions { max_bits: 8, max_restarts: 1, ..Default::default() };
        assert!(matches!(factorize(&f, &opts), Err(Error::FactorizationFailed { .. })));
    }
}
