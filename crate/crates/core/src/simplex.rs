//! Nelder-Mead simplex minimization with dimension-adaptive coefficients
//! (reflection 1, expansion 1 + 2/n, contraction 0.75 - 1/(2n), shrink 1 - 1/n).

#[derive(Debug, Clone)]
pub(crate) struct SimplexOptions {
    pub max_iters: usize,
    /// Function-value spread at which the simplex counts as converged; the
    /// simplex diameter must also fall below `sqrt(tol)`.
    pub tol: f64,
    pub initial_step: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct SimplexResult {
    pub x: Vec<f64>,
    pub fval: f64,
    #[allow(dead_code)]
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

pub(crate) fn minimize<F>(f: F, x0: &[f64], opts: &SimplexOptions) -> SimplexResult
where
    F: Fn(&[f64]) -> f64,
{
    let dim = x0.len();
    assert!(dim >= 1, "cannot minimize over an empty parameter vector");
    let nf = dim as f64;
    let (alpha, beta, gamma, delta) = if dim >= 2 {
        (1.0, 1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf)
    } else {
        (1.0, 2.0, 0.5, 0.5)
    };

    let mut evaluations = 0usize;
    let mut eval = |x: &[f64]| {
        evaluations += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut points: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    points.push(x0.to_vec());
    for i in 0..dim {
        let mut p = x0.to_vec();
        p[i] += opts.initial_step;
        points.push(p);
    }
    let mut values: Vec<f64> = points.iter().map(|p| eval(p)).collect();

    let mut iterations = 0;
    let mut converged = false;
    let diameter_tol = opts.tol.sqrt();
    while iterations < opts.max_iters {
        sort_simplex(&mut points, &mut values);
        if values[dim] - values[0] <= opts.tol && diameter(&points) <= diameter_tol {
            converged = true;
            break;
        }
        iterations += 1;

        let centroid = centroid(&points[..dim]);
        let worst = &points[dim];
        let reflected = affine(&centroid, worst, alpha);
        let fr = eval(&reflected);

        if fr < values[0] {
            let expanded = affine(&centroid, worst, alpha * beta);
            let fe = eval(&expanded);
            if fe < fr {
                points[dim] = expanded;
                values[dim] = fe;
            } else {
                points[dim] = reflected;
                values[dim] = fr;
            }
        } else if fr < values[dim - 1] {
            points[dim] = reflected;
            values[dim] = fr;
        } else {
            let outside = fr < values[dim];
            let contracted = if outside {
                affine(&centroid, worst, alpha * gamma)
            } else {
                affine(&centroid, worst, -gamma)
            };
            let fc = eval(&contracted);
            let accept = if outside { fc <= fr } else { fc < values[dim] };
            if accept {
                points[dim] = contracted;
                values[dim] = fc;
            } else {
                let best = points[0].clone();
                for k in 1..=dim {
                    for (x, b) in points[k].iter_mut().zip(&best) {
                        *x = b + delta * (*x - b);
                    }
                    values[k] = eval(&points[k]);
                }
            }
        }
    }
    sort_simplex(&mut points, &mut values);
    SimplexResult {
        x: points.swap_remove(0),
        fval: values[0],
        iterations,
        evaluations,
        converged,
    }
}

fn sort_simplex(points: &mut Vec<Vec<f64>>, values: &mut Vec<f64>) {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    *points = order.iter().map(|&i| points[i].clone()).collect();
    *values = order.iter().map(|&i| values[i]).collect();
}

fn centroid(points: &[Vec<f64>]) -> Vec<f64> {
    let k = points.len() as f64;
    let mut c = vec![0.0; points[0].len()];
    for p in points {
        for (ci, pi) in c.iter_mut().zip(p) {
            *ci += pi / k;
        }
    }
    c
}

/// `c + t (c - w)`.
fn affine(c: &[f64], w: &[f64], t: f64) -> Vec<f64> {
    c.iter().zip(w).map(|(ci, wi)| ci + t * (ci - wi)).collect()
}

fn diameter(points: &[Vec<f64>]) -> f64 {
    let best = &points[0];
    points[1..]
        .iter()
        .flat_map(|p| p.iter().zip(best).map(|(a, b)| (a - b).abs()))
        .fold(0.0, f64::max)
}
