use crate::error::{CliError, Result};

/// Parses `start:stop:count` (inclusive, evenly spaced) or a comma list.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = |why: &str| CliError::input(format!("grid {spec:?}: {why}"));
    let number = |s: &str| {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| bad(&format!("{:?} is not a finite number", s.trim())))
    };
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        let [start, stop, count] = parts[..] else {
            return Err(bad("expected start:stop:count"));
        };
        let (start, stop) = (number(start)?, number(stop)?);
        let count: usize = count
            .trim()
            .parse()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| bad("count must be a positive integer"))?;
        if count == 1 {
            return Ok(vec![start]);
        }
        let step = (stop - start) / (count - 1) as f64;
        let mut grid: Vec<f64> = (0..count).map(|i| start + step * i as f64).collect();
        grid[count - 1] = stop;
        return Ok(grid);
    }
    spec.split(',').map(number).collect()
}
