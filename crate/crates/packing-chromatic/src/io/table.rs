//! Aligned text and CSV rendering of per-instance bounds tables.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowStatus {
    Exact,
    Bounds,
    Skipped,
}

impl RowStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RowStatus::Exact => "exact",
            RowStatus::Bounds => "bounds",
            RowStatus::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Debug)]
pub struct TableRow {
    pub q: u32,
    pub m: u32,
    pub lower: Option<u64>,
    pub upper: Option<u64>,
    pub status: RowStatus,
}

fn cells_of(row: &TableRow) -> [String; 5] {
    [
        row.q.to_string(),
        row.m.to_string(),
        row.lower.map_or_else(|| "-".to_string(), |v| v.to_string()),
        row.upper.map_or_else(|| "-".to_string(), |v| v.to_string()),
        row.status.as_str().to_string(),
    ]
}

/// Column-aligned table: numbers right-aligned, status left-aligned, `-`
/// for unknown cells, no trailing spaces.
pub fn render_bounds_table(rows: &[TableRow]) -> String {
    let header = ["q", "m", "lower", "upper", "status"];
    let body: Vec<[String; 5]> = rows.iter().map(cells_of).collect();
    let mut width = header.map(str::len);
    for row in &body {
        for (w, cell) in width.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let mut push_row = |cells: [&str; 5]| {
        for (i, cell) in cells.iter().enumerate() {
            if i > 0 {
                out.push_str("  ");
            }
            if i < 4 {
                out.push_str(&format!("{cell:>w$}", w = width[i]));
            } else {
                out.push_str(cell);
            }
        }
        out.push('\n');
    };
    push_row(header);
    for row in &body {
        push_row([&row[0], &row[1], &row[2], &row[3], &row[4]]);
    }
    out
}

/// `q,m,lower,upper,status` with empty fields for unknown cells.
pub fn render_bounds_csv(rows: &[TableRow]) -> String {
    let mut out = String::from("q,m,lower,upper,status\n");
    for row in rows {
        let lower = row.lower.map_or_else(String::new, |v| v.to_string());
        let upper = row.upper.map_or_else(String::new, |v| v.to_string());
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row.q,
            row.m,
            lower,
            upper,
            row.status.as_str()
        ));
    }
    out
}
