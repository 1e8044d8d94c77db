//! SNR argument parsing.

#[derive(Debug, Clone, PartialEq)]
pub struct SnrPoints(pub Vec<f64>);

pub fn parse_single(s: &str) -> Result<f64, String> {
    let v = match s.trim() {
        "inf" | "+inf" => f64::INFINITY,
        t => t.parse::<f64>().map_err(|_| format!("invalid SNR `{s}`"))?,
    };
    if v.is_nan() || v == f64::NEG_INFINITY {
        return Err(format!("invalid SNR `{s}`"));
    }
    Ok(v)
}

/// `x`, `inf`, or `start:step:stop` (inclusive of `stop`).
pub fn parse_range(s: &str) -> Result<SnrPoints, String> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [single] => Ok(SnrPoints(vec![parse_single(single)?])),
        [start, step, stop] => {
            let (start, step, stop) = (parse_single(start)?, parse_single(step)?, parse_single(stop)?);
            if !(start.is_finite() && step.is_finite() && stop.is_finite()) || step <= 0.0 || stop < start {
                return Err(format!("bad SNR range `{s}`: need finite start <= stop and step > 0"));
            }
            let n = ((stop - start) / step + 1e-9).floor() as usize;
            Ok(SnrPoints((0..=n).map(|i| start + step * i as f64).collect()))
        }
        _ => Err(format!("bad SNR spec `{s}`, expected x or start:step:stop")),
    }
}
