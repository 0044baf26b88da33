//! Fixed-size ASCII plot of a calibration curve with observed points.

use wastesense::calibration::{CalibrationModel, CalibrationPoint};

pub const WIDTH: usize = 60;
pub const HEIGHT: usize = 16;

const CURVE: char = '.';
const POINT: char = 'o';

pub fn render_chart(model: &CalibrationModel, observed: &[CalibrationPoint]) -> String {
    let (lo, hi) = model.weight_range();
    let x_min = observed.iter().map(|p| p.weight_lb).fold(lo, f64::min);
    let mut x_max = observed.iter().map(|p| p.weight_lb).fold(hi, f64::max);
    if x_max <= x_min {
        x_max = x_min + 1.0;
    }
    let col_x = |c: usize| x_min + (x_max - x_min) * c as f64 / (WIDTH - 1) as f64;

    let curve: Vec<Option<f64>> = (0..WIDTH)
        .map(|c| {
            let x = col_x(c);
            (lo..=hi).contains(&x).then(|| model.evaluate(x))
        })
        .collect();
    let ys = curve
        .iter()
        .flatten()
        .copied()
        .chain(observed.iter().map(|p| p.median_rssi_dbm));
    let (y_lo, y_hi) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), y| (a.min(y), b.max(y)));
    let (mut y_min, mut y_max) = (y_lo.floor(), y_hi.ceil());
    if y_max <= y_min {
        y_min -= 1.0;
        y_max += 1.0;
    }
    let row_of = |y: f64| {
        let r = ((y_max - y) / (y_max - y_min) * (HEIGHT - 1) as f64).round();
        r.clamp(0.0, (HEIGHT - 1) as f64) as usize
    };
    let col_of = |x: f64| {
        let c = ((x - x_min) / (x_max - x_min) * (WIDTH - 1) as f64).round();
        c.clamp(0.0, (WIDTH - 1) as f64) as usize
    };

    let mut grid = vec![vec![' '; WIDTH]; HEIGHT];
    for (c, y) in curve.iter().enumerate() {
        if let Some(y) = y {
            grid[row_of(*y)][c] = CURVE;
        }
    }
    for p in observed {
        grid[row_of(p.median_rssi_dbm)][col_of(p.weight_lb)] = POINT;
    }

    let mut out = String::new();
    let mid = HEIGHT / 2;
    for (r, line) in grid.iter().enumerate() {
        let label = match r {
            0 => format!("{y_max:>7.1}"),
            r if r == HEIGHT - 1 => format!("{y_min:>7.1}"),
            r if r == mid => {
                let y = y_max - (y_max - y_min) * r as f64 / (HEIGHT - 1) as f64;
                format!("{y:>7.1}")
            }
            _ => " ".repeat(7),
        };
        let body: String = line.iter().collect();
        out.push_str(&format!("{label} |{}\n", body.trim_end()));
    }
    out.push_str(&format!("{} +{}\n", " ".repeat(7), "-".repeat(WIDTH)));
    let left = format!("{x_min:.1}");
    let right = format!("{x_max:.1} lb");
    let gap = (WIDTH + 1).saturating_sub(left.len() + right.len());
    out.push_str(&format!("{}  {left}{}{right}\n", " ".repeat(7), " ".repeat(gap)));
    out.push_str(&format!("{}  RSSI (dBm) vs weight   {CURVE} model   {POINT} observed\n", " ".repeat(7)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_is_fixed_size_and_marks_points() {
        let model = CalibrationModel::new(vec![-22.0, -0.82621, 0.0202049, -0.000161541], (0.0, 43.8)).unwrap();
        let pts = [CalibrationPoint::new(0.0, -22.0), CalibrationPoint::new(43.8, -33.0)];
        let chart = render_chart(&model, &pts);
        let lines: Vec<&str> = chart.lines().collect();
        assert_eq!(lines.len(), HEIGHT + 3);
        assert!(lines.iter().all(|l| l.chars().count() <= 8 + 1 + WIDTH + 2));
        assert!(lines[0].starts_with("  -22.0 |o"));
        assert!(lines[HEIGHT - 1].starts_with("  -34.0 |"));
        let marks: usize = lines[..HEIGHT].iter().map(|l| l.matches(POINT).count()).sum();
        assert_eq!(marks, 2);
        assert!(lines[HEIGHT + 1].ends_with("43.8 lb"));
    }
}
