//! Brute-force Lloyd written without any of the library's code paths.
//! Plain `Vec<f64>` rows, full distance tables, exact-tie rule: the highest
//! index among the minimal distances.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Norm {
    L1,
    L2,
}

pub fn dist(norm: Norm, a: &[f64], b: &[f64]) -> f64 {
    match norm {
        Norm::L1 => {
            let mut s = 0.0;
            for i in 0..a.len() {
                s += (a[i] - b[i]).abs();
            }
            s
        }
        Norm::L2 => {
            let mut s = 0.0;
            for i in 0..a.len() {
                s += (a[i] - b[i]) * (a[i] - b[i]);
            }
            s.sqrt()
        }
    }
}

fn argmin_last(row: &[f64]) -> usize {
    let min = row.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut pick = 0;
    for (j, d) in row.iter().enumerate() {
        if *d == min {
            pick = j;
        }
    }
    pick
}

/// State after one iteration (assignment, then mean update unless the
/// assignment repeated).
#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub labels: Vec<usize>,
    pub centers: Vec<Vec<f64>>,
    pub changed: bool,
}

pub fn lloyd_steps(data: &[Vec<f64>], init: &[Vec<f64>], norm: Norm, max_iter: usize) -> Vec<Step> {
    let k = init.len();
    let d = data[0].len();
    let mut centers: Vec<Vec<f64>> = init.to_vec();
    let mut prev: Option<Vec<usize>> = None;
    let mut steps = Vec::new();
    for _ in 0..max_iter {
        let table: Vec<Vec<f64>> = data
            .iter()
            .map(|x| centers.iter().map(|c| dist(norm, x, c)).collect())
            .collect();
        let labels: Vec<usize> = table.iter().map(|row| argmin_last(row)).collect();
        let changed = prev.as_ref() != Some(&labels);
        if changed {
            for j in 0..k {
                let members: Vec<&Vec<f64>> = data.iter().zip(&labels).filter(|(_, l)| **l == j).map(|(x, _)| x).collect();
                if members.is_empty() {
                    continue;
                }
                let mut sum = vec![0.0; d];
                for m in &members {
                    for i in 0..d {
                        sum[i] += m[i];
                    }
                }
                centers[j] = sum.iter().map(|s| s / members.len() as f64).collect();
            }
        }
        steps.push(Step {
            labels: labels.clone(),
            centers: centers.clone(),
            changed,
        });
        if !changed {
            break;
        }
        prev = Some(labels);
    }
    steps
}

/// Sum of squared distances of each point to its center.
pub fn sse(data: &[Vec<f64>], labels: &[usize], centers: &[Vec<f64>], norm: Norm) -> f64 {
    data.iter()
        .zip(labels)
        .map(|(x, l)| {
            let d = dist(norm, x, &centers[*l]);
            d * d
        })
        .sum()
}

/// First k pairwise-distinct rows in order.
pub fn first_k_distinct(data: &[Vec<f64>], k: usize) -> Option<Vec<Vec<f64>>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for x in data {
        if out.len() == k {
            break;
        }
        if !out.iter().any(|c| c == x) {
            out.push(x.clone());
        }
    }
    (out.len() == k).then_some(out)
}
