//! Adaptive Gauss–Kronrod quadrature and dyadic tail summation with
//! power-law extrapolation.
//!
//! `integrate` handles finite intervals. `dyadic_sum` handles improper
//! integrals: the caller splits the domain into geometrically shrinking (or
//! growing) pieces, and the piece sums are extrapolated as a geometric series
//! once their ratio settles. A ratio ≥ 1 means a power-law integrand with a
//! non-integrable exponent, reported as divergence.

use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// One 7/15-point Gauss–Kronrod panel: (Kronrod estimate, |Kronrod − Gauss|).
pub fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, &x) in XGK.iter().enumerate().take(7) {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quad {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive GK15 on [a, b]; stops when the error estimate is below
/// `max(abs_tol, rel_tol·|value|)` or after `max_panels` bisections.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
) -> Quad {
    if b <= a {
        return Quad {
            value: 0.0,
            error: 0.0,
            converged: true,
        };
    }
    let (v, e) = gk15(&mut f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Panel {
        a,
        b,
        value: v,
        error: e,
    });
    let mut value = v;
    let mut error = e;
    let mut panels = 1;
    while error > abs_tol.max(rel_tol * value.abs()) {
        if panels >= max_panels {
            return Quad {
                value,
                error,
                converged: false,
            };
        }
        let worst = heap.pop().expect("heap never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval at floating-point resolution; accept it
            heap.push(Panel { error: 0.0, ..worst });
            error = heap.iter().map(|p| p.error).sum();
            if heap.iter().all(|p| p.error == 0.0) {
                break;
            }
            continue;
        }
        let (v1, e1) = gk15(&mut f, worst.a, mid);
        let (v2, e2) = gk15(&mut f, mid, worst.b);
        value += v1 + v2 - worst.value;
        error += e1 + e2 - worst.error;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
        panels += 1;
        if panels % 64 == 0 {
            // resum to shed accumulated rounding
            value = heap.iter().map(|p| p.value).sum();
            error = heap.iter().map(|p| p.error).sum();
        }
    }
    Quad {
        value: heap.iter().map(|p| p.value).sum(),
        error: heap.iter().map(|p| p.error).sum(),
        converged: true,
    }
}

/// Integrates over [a, b] split at the given interior breakpoints.
pub fn integrate_with_breaks<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
) -> Quad {
    let mut cuts: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|x| x.is_finite() && *x > a && *x < b)
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut out = Quad {
        value: 0.0,
        error: 0.0,
        converged: true,
    };
    let mut lo = a;
    for hi in cuts.into_iter().chain(std::iter::once(b)) {
        let q = integrate(&mut f, lo, hi, abs_tol, rel_tol, max_panels);
        out.value += q.value;
        out.error += q.error;
        out.converged &= q.converged;
        lo = hi;
    }
    out
}

/// Outcome of an improper integral.
#[derive(Debug, Clone, PartialEq)]
pub enum TailSum {
    /// Convergent; `tail` is the extrapolated remainder included in `value`.
    Finite { value: f64, tail: f64, error: f64 },
    /// Piece ratio ≥ 1: the integrand decays too slowly.
    Divergent { ratio: f64 },
    /// No stable geometric regime reached within the level budget.
    Inconclusive { partial: f64, last_ratios: Vec<f64> },
}

impl TailSum {
    pub fn value(&self) -> Option<f64> {
        match self {
            TailSum::Finite { value, .. } => Some(*value),
            _ => None,
        }
    }
}

/// Tuning for `dyadic_sum`.
#[derive(Debug, Clone, Copy)]
pub struct TailOptions {
    pub rel_tol: f64,
    pub min_levels: usize,
    pub max_levels: usize,
    /// number of trailing ratios that must agree
    pub window: usize,
    /// relative spread tolerated among those ratios
    pub ratio_spread: f64,
}

impl Default for TailOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            min_levels: 6,
            max_levels: 400,
            window: 4,
            ratio_spread: 0.02,
        }
    }
}

/// Sums `piece(0) + piece(1) + ...` where the pieces are integrals over
/// geometrically scaled sub-domains. `piece` returns (value, quadrature error).
pub fn dyadic_sum<F: FnMut(usize) -> (f64, f64)>(mut piece: F, opts: TailOptions) -> TailSum {
    let mut total = 0.0;
    let mut err = 0.0;
    let mut pieces: Vec<f64> = Vec::new();
    let mut zeros = 0usize;
    let mut prev_extrapolated = f64::NAN;
    for level in 0..opts.max_levels {
        let (p, e) = piece(level);
        if !p.is_finite() {
            return TailSum::Divergent { ratio: f64::INFINITY };
        }
        total += p;
        err += e;
        pieces.push(p);
        if p == 0.0 {
            zeros += 1;
        } else {
            zeros = 0;
        }
        if level + 1 < opts.min_levels {
            continue;
        }
        if zeros >= 3 {
            return TailSum::Finite {
                value: total,
                tail: 0.0,
                error: err,
            };
        }
        let Some(q) = stable_ratio(&pieces, opts) else {
            continue;
        };
        if q >= 1.0 - 1e-9 {
            return TailSum::Divergent { ratio: q };
        }
        let tail = p * q / (1.0 - q);
        let extrapolated = total + tail;
        let settled = (extrapolated - prev_extrapolated).abs() <= opts.rel_tol * extrapolated.abs()
            || tail.abs() <= opts.rel_tol * total.abs();
        prev_extrapolated = extrapolated;
        if settled {
            return TailSum::Finite {
                value: extrapolated,
                tail,
                error: err + (tail * 1e-3).abs(),
            };
        }
    }
    let k = pieces.len();
    let last_ratios: Vec<f64> = (k.saturating_sub(opts.window)..k)
        .filter(|&i| i > 0 && pieces[i - 1] != 0.0)
        .map(|i| pieces[i] / pieces[i - 1])
        .collect();
    TailSum::Inconclusive {
        partial: total,
        last_ratios,
    }
}

fn stable_ratio(pieces: &[f64], opts: TailOptions) -> Option<f64> {
    let k = pieces.len();
    if k < opts.window + 1 {
        return None;
    }
    let tail = &pieces[k - opts.window - 1..];
    if tail.iter().any(|p| *p <= 0.0) {
        return None;
    }
    let ratios: Vec<f64> = tail.windows(2).map(|w| w[1] / w[0]).collect();
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    if hi - lo <= opts.ratio_spread * mean {
        Some(*ratios.last().unwrap())
    } else {
        None
    }
}

/// ∫_0^1 f over (0, 1) with possible integrable (or not) singularities at
/// both endpoints: dyadic pieces [2^{-k-1}, 2^{-k}]·½ toward 0 and the
/// mirror image toward 1.
pub fn unit_interval_singular<F: FnMut(f64) -> f64>(
    mut f: F,
    abs_tol: f64,
    opts: TailOptions,
) -> TailSum {
    let side = |toward_zero: bool, f: &mut F| {
        dyadic_sum(
            |k| {
                let hi = 0.5f64.powi(k as i32 + 1);
                let lo = hi * 0.5;
                let q = if toward_zero {
                    integrate(&mut *f, lo, hi, abs_tol * hi, opts.rel_tol, 200)
                } else {
                    integrate(|x| f(1.0 - x), lo, hi, abs_tol * hi, opts.rel_tol, 200)
                };
                (q.value, q.error)
            },
            opts,
        )
    };
    let left = side(true, &mut f);
    let right = side(false, &mut f);
    combine(left, right)
}

/// ∫_a^∞ f via pieces [a·2^k, a·2^{k+1}].
pub fn semi_infinite<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    abs_tol: f64,
    opts: TailOptions,
) -> TailSum {
    assert!(a > 0.0, "semi_infinite needs a positive start");
    dyadic_sum(
        |k| {
            let lo = a * 2f64.powi(k as i32);
            let q = integrate(&mut f, lo, 2.0 * lo, abs_tol, opts.rel_tol, 200);
            (q.value, q.error)
        },
        opts,
    )
}

/// Sum of two improper integrals.
pub fn combine(a: TailSum, b: TailSum) -> TailSum {
    match (a, b) {
        (TailSum::Divergent { ratio }, _) | (_, TailSum::Divergent { ratio }) => {
            TailSum::Divergent { ratio }
        }
        (
            TailSum::Finite {
                value: v1,
                tail: t1,
                error: e1,
            },
            TailSum::Finite {
                value: v2,
                tail: t2,
                error: e2,
            },
        ) => TailSum::Finite {
            value: v1 + v2,
            tail: t1 + t2,
            error: e1 + e2,
        },
        (TailSum::Inconclusive { partial, last_ratios }, other)
        | (other, TailSum::Inconclusive { partial, last_ratios }) => TailSum::Inconclusive {
            partial: partial + other.value().unwrap_or(0.0),
            last_ratios,
        },
    }
}
