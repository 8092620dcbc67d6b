//! Alignment of patches, locality checks for maps, and metric bounds.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::map::TilingMap;
use crate::patch::{central_patch, Patch};
use crate::rational::{q, Rational, Vector};
use crate::tiling::{sample_agreeing_pairs, Placed, Tiling};

/// Representative of `v mod Z^d` in `[-1/2, 1/2)^d`.
pub fn reduce_shift(v: &Vector) -> Vector {
    let half = q(1, 2);
    Vector(v.0.iter().map(|x| (x + &half).fract() - &half).collect())
}

/// The unique `v` with `|v| <= bound` and `p2 + v == p1`, if any.
pub fn align(p1: &Patch, p2: &Patch, bound: &Rational) -> Result<Option<Vector>> {
    if *bound >= q(1, 2) {
        return Err(Error::parameter("alignment bound must be below 1/2"));
    }
    let v = reduce_shift(&(&p2.shift - &p1.shift));
    if !v.norm_le(bound) {
        return Ok(None);
    }
    Ok((p2.translated(&v) == *p1).then_some(v))
}

/// The unique `v` with `|v| <= bound` and `(a - v) ∩ B_r = b ∩ B_r`, if any.
pub fn align_views(a: &Placed, b: &Placed, radius: &Rational, bound: &Rational) -> Result<Option<Vector>> {
    if *bound >= q(1, 2) {
        return Err(Error::parameter("alignment bound must be below 1/2"));
    }
    let v = reduce_shift(&(b.shift() - a.shift()));
    if !v.norm_le(bound) {
        return Ok(None);
    }
    let pa = central_patch(&a.minus(&v), radius)?;
    let pb = central_patch(b, radius)?;
    Ok((pa == pb).then_some(v))
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalityVerdict {
    pub radius: Rational,
    pub checked: usize,
    pub pass: bool,
    /// First failing input pair in sample order.
    #[serde(skip)]
    pub counterexample: Option<(Tiling, Tiling)>,
}

/// Samples pairs agreeing on `B_r(0)` and checks their images agree on `B_1(0)`.
pub fn check_local(f: &dyn TilingMap, radius: &Rational, n: usize, seed: u64) -> Result<LocalityVerdict> {
    check_pairs(f, radius, &Rational::one(), n, seed)
}

/// `check_local` with both radii enlarged by each `ρ'` of the grid.
pub fn check_uniformly_local(
    f: &dyn TilingMap,
    radius: &Rational,
    slack: &[Rational],
    n: usize,
    seed: u64,
) -> Result<LocalityVerdict> {
    let mut checked = 0;
    for (i, rho) in slack.iter().enumerate() {
        let v = check_pairs(
            f,
            &(radius + rho),
            &(Rational::one() + rho),
            n,
            seed.wrapping_add(i as u64),
        )?;
        checked += v.checked;
        if !v.pass {
            return Ok(LocalityVerdict {
                radius: radius.clone(),
                checked,
                pass: false,
                counterexample: v.counterexample,
            });
        }
    }
    Ok(LocalityVerdict {
        radius: radius.clone(),
        checked,
        pass: true,
        counterexample: None,
    })
}

fn check_pairs(f: &dyn TilingMap, input: &Rational, output: &Rational, n: usize, seed: u64) -> Result<LocalityVerdict> {
    let sys = f.source().clone();
    let pairs = sample_agreeing_pairs(&sys, input, n, seed)?;
    let agree = pairs
        .par_iter()
        .map(|(t1, t2)| {
            let a = f.apply(&t1.place(&sys)?, output)?;
            let b = f.apply(&t2.place(&sys)?, output)?;
            Ok(a == b)
        })
        .collect::<Result<Vec<bool>>>()?;
    let bad = agree.iter().position(|ok| !ok);
    Ok(LocalityVerdict {
        radius: input.clone(),
        checked: pairs.len(),
        pass: bad.is_none(),
        counterexample: bad.map(|i| pairs[i].clone()),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MetricBounds {
    pub lower: Rational,
    pub upper: Rational,
}

/// Bounds on the tiling metric from alignment tests at radii `1, 2, ..., depth`.
pub fn metric_bounds(a: &Placed, b: &Placed, depth: usize) -> Result<MetricBounds> {
    if a.dim() != b.dim() {
        return Err(Error::parameter("tilings of different dimension"));
    }
    if a.same_as(b) {
        return Ok(MetricBounds {
            lower: Rational::zero(),
            upper: Rational::zero(),
        });
    }
    let dim = a.dim();
    let w = reduce_shift(&(b.shift() - a.shift()));
    let mut upper = Rational::one();
    let mut lower = Rational::zero();
    for r in 1..=depth.max(1) as i64 {
        let radius = Rational::from_int(r);
        let eps = radius.recip();
        // upper: some v with |v| <= ε makes them agree on B_{1/ε}
        for v in lattice_translates(&w, dim) {
            if v.norm_le(&eps) && central_patch(&a.minus(&v), &radius)? == central_patch(b, &radius)? {
                let cand = v.norm_upper().max(eps.clone());
                if cand < upper {
                    upper = cand;
                }
                break;
            }
        }
        // lower: no pair of translations below ε can make them agree on B_{1/ε}
        if r >= 4 {
            let inner = &radius - &eps;
            let close = w.norm_lt(&(Rational::from_int(2) * &eps));
            if !close || central_patch(&a.minus(&w), &inner)? != central_patch(b, &inner)? {
                lower = lower.max(eps);
            }
        }
    }
    Ok(MetricBounds { lower, upper })
}

pub fn tiling_metric_bounds(
    sys: &std::sync::Arc<crate::system::SubstitutionSystem>,
    t1: &Tiling,
    t2: &Tiling,
    depth: usize,
) -> Result<MetricBounds> {
    if t1 == t2 {
        return Ok(MetricBounds {
            lower: Rational::zero(),
            upper: Rational::zero(),
        });
    }
    metric_bounds(&t1.place(sys)?, &t2.place(sys)?, depth)
}

fn lattice_translates(w: &Vector, dim: usize) -> Vec<Vector> {
    let steps: Vec<Vec<i64>> = if dim == 1 {
        vec![vec![0], vec![-1], vec![1]]
    } else {
        let mut s = vec![vec![0, 0]];
        for x in -1..=1 {
            for y in -1..=1 {
                if (x, y) != (0, 0) {
                    s.push(vec![x, y]);
                }
            }
        }
        s
    };
    steps.iter().map(|e| w + &Vector::from_ints(e)).collect()
}
