//! Sign-change scan with bisection refinement.

/// Grid spacing of the root scan, lb.
pub const ROOT_SCAN_STEP_LB: f64 = 0.01;

/// Bisection stops once the bracket is narrower than this, lb.
const BISECTION_WIDTH_LB: f64 = 1e-10;

/// Every root of `f` on `[lo, hi]` that shows up as a sign change (or an exact
/// zero) on a grid of spacing `step`, ascending.
///
/// Each sign change across a grid cell yields exactly one root. Roots where
/// `f` touches zero without changing sign are only found if they land on a
/// grid node.
pub fn find_roots<F>(f: F, lo: f64, hi: f64, step: f64) -> Vec<f64>
where
    F: Fn(f64) -> f64,
{
    assert!(step > 0.0, "scan step must be positive");
    let mut roots = Vec::new();
    if !(lo <= hi) {
        return roots;
    }

    let cells = ((hi - lo) / step).ceil().max(0.0) as usize;
    let node = |i: usize| if i >= cells { hi } else { lo + i as f64 * step };

    let mut a = lo;
    let mut fa = f(a);
    if fa == 0.0 {
        roots.push(a);
    }
    for i in 1..=cells {
        let b = node(i);
        let fb = f(b);
        if fb == 0.0 {
            roots.push(b);
        } else if fa != 0.0 && (fa < 0.0) != (fb < 0.0) {
            roots.push(bisect(&f, a, b, fa));
        }
        a = b;
        fa = fb;
    }
    roots
}

fn bisect<F>(f: &F, mut a: f64, mut b: f64, mut fa: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    while b - a > BISECTION_WIDTH_LB {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}
