//! Globally adaptive cubature on rectangles using a tensor-product
//! Gauss–Kronrod (7, 15) rule.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

// Kronrod abscissae on [0, 1]; odd indices are the Gauss-7 nodes.
#[allow(clippy::excessive_precision)]
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
#[allow(clippy::excessive_precision)]
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
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// 15 nodes on [-1, 1] with Kronrod and Gauss weights (Gauss weight 0 off-grid).
fn rule() -> [(f64, f64, f64); 15] {
    let mut out = [(0.0, 0.0, 0.0); 15];
    for j in 0..7 {
        let wg = if j % 2 == 1 { WG[j / 2] } else { 0.0 };
        out[j] = (-XGK[j], WGK[j], wg);
        out[14 - j] = (XGK[j], WGK[j], wg);
    }
    out[7] = (0.0, WGK[7], WG[3]);
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

struct Region {
    rect: Rect,
    value: f64,
    error: f64,
    split_x: bool,
}

impl PartialEq for Region {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Region {}
impl PartialOrd for Region {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Region {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn apply_rule<F: Fn(f64, f64) -> f64>(f: &F, rect: Rect) -> Region {
    let nodes = rule();
    let (cx, hx) = (0.5 * (rect.x0 + rect.x1), 0.5 * (rect.x1 - rect.x0));
    let (cy, hy) = (0.5 * (rect.y0 + rect.y1), 0.5 * (rect.y1 - rect.y0));
    let (mut kk, mut gk, mut kg, mut gg) = (0.0, 0.0, 0.0, 0.0);
    for &(u, wku, wgu) in &nodes {
        let x = cx + hx * u;
        let (mut col_k, mut col_g) = (0.0, 0.0);
        for &(v, wkv, wgv) in &nodes {
            let fv = f(x, cy + hy * v);
            col_k += wkv * fv;
            col_g += wgv * fv;
        }
        kk += wku * col_k;
        gk += wgu * col_k;
        kg += wku * col_g;
        gg += wgu * col_g;
    }
    let area = hx * hy;
    let err_x = (kk - gk).abs() * area;
    let err_y = (kk - kg).abs() * area;
    let err = ((kk - gg).abs() * area).max(err_x).max(err_y);
    Region {
        rect,
        value: kk * area,
        error: err,
        split_x: err_x >= err_y,
    }
}

const EVALS_PER_REGION: usize = 225;

/// Integrates `f` over `rect` until the summed error estimate is at most
/// `tolerance` or `max_evaluations` is spent.
pub fn integrate_2d<F>(f: F, rect: Rect, tolerance: f64, max_evaluations: usize) -> Result<QuadResult>
where
    F: Fn(f64, f64) -> f64,
{
    let first = apply_rule(&f, rect);
    let mut value = first.value;
    let mut error = first.error;
    let mut evaluations = EVALS_PER_REGION;
    let mut heap = BinaryHeap::new();
    heap.push(first);

    while error > tolerance {
        if evaluations + 2 * EVALS_PER_REGION > max_evaluations {
            return Err(Error::Quadrature {
                estimate: value,
                error_bound: error,
                tolerance,
            });
        }
        let worst = heap.pop().expect("heap holds at least one region");
        let r = worst.rect;
        let (a, b) = if worst.split_x {
            let mid = 0.5 * (r.x0 + r.x1);
            (Rect { x1: mid, ..r }, Rect { x0: mid, ..r })
        } else {
            let mid = 0.5 * (r.y0 + r.y1);
            (Rect { y1: mid, ..r }, Rect { y0: mid, ..r })
        };
        let (ra, rb) = (apply_rule(&f, a), apply_rule(&f, b));
        evaluations += 2 * EVALS_PER_REGION;
        value += ra.value + rb.value - worst.value;
        error += ra.error + rb.error - worst.error;
        heap.push(ra);
        heap.push(rb);
        // re-sum occasionally to shed accumulated rounding in the running totals
        if heap.len() % 64 == 0 {
            value = heap.iter().map(|r| r.value).sum();
            error = heap.iter().map(|r| r.error).sum();
        }
    }
    Ok(QuadResult {
        value,
        error,
        evaluations,
    })
}
