//! Serialization helpers shared by the record exporters.

/// 17 significant digits: enough for a bit-exact f64 round trip through text.
pub fn fmt_g17(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    format!("{x:.16e}")
}

/// Optional field for CSV cells; `None` prints as the empty cell.
pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_g17).unwrap_or_default()
}
