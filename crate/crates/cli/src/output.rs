//! Table rendering.  CSV and JSON share one float formatter (17 significant
//! digits) so the two encodings of a run carry identical numeric values.

pub enum Cell {
    Int(i64),
    Float(f64),
    Bool(bool),
    Str(String),
}

pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

pub fn float17(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn cell_text(cell: &Cell) -> String {
    match cell {
        Cell::Int(v) => v.to_string(),
        Cell::Float(v) => float17(*v),
        Cell::Bool(v) => v.to_string(),
        Cell::Str(v) => v.clone(),
    }
}

pub fn csv(table: &Table) -> String {
    let mut out = String::new();
    out.push_str(&table.columns.join(","));
    out.push('\n');
    for row in &table.rows {
        let line: Vec<String> = row.iter().map(|c| csv_field(&cell_text(c))).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn json_cell(cell: &Cell) -> String {
    match cell {
        Cell::Int(v) => v.to_string(),
        Cell::Float(v) => float17(*v),
        Cell::Bool(v) => v.to_string(),
        Cell::Str(v) => json_string(v),
    }
}

/// Single object `{config, rows, residuals}`; rows are objects keyed by
/// column name.
pub fn json(
    command: &str,
    config: &[(String, String)],
    table: &Table,
    residuals: &[(&'static str, f64)],
) -> String {
    let mut out = String::from("{\"config\":{");
    out.push_str(&format!("\"command\":{}", json_string(command)));
    for (k, v) in config {
        out.push_str(&format!(",{}:{}", json_string(k), json_string(v)));
    }
    out.push_str("},\"rows\":[");
    for (i, row) in table.rows.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push('{');
        for (j, (col, cell)) in table.columns.iter().zip(row.iter()).enumerate() {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&format!("{}:{}", json_string(col), json_cell(cell)));
        }
        out.push('}');
    }
    out.push_str("],\"residuals\":{");
    for (i, (name, value)) in residuals.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&format!("{}:{}", json_string(name), float17(*value)));
    }
    out.push_str("}}\n");
    out
}
