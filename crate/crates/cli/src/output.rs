use std::fmt::Write as _;

use crate::args::Format;

/// Rectangular text output with a header row; rendered as CSV or as
/// right-aligned columns.
#[derive(Debug)]
pub struct Sheet {
    header: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
    footer: Vec<String>,
}

#[derive(Debug, Clone)]
pub enum Cell {
    Text(String),
    /// Configuration quantity (`x`, `dt`, ...), shortest plain decimal.
    Plain(f64),
    /// Solution value or error magnitude, shortest scientific.
    Sci(f64),
    Empty,
}

impl Cell {
    fn render(&self, format: Format) -> String {
        match (self, format) {
            (Cell::Text(s), _) => s.clone(),
            (Cell::Plain(v), _) => format!("{v}"),
            (Cell::Sci(v), Format::Csv) => format!("{v:e}"),
            (Cell::Sci(v), Format::Pretty) => format!("{v:.4e}"),
            (Cell::Empty, Format::Csv) => String::new(),
            (Cell::Empty, Format::Pretty) => "-".to_string(),
        }
    }
}

impl Sheet {
    pub fn new(header: Vec<&'static str>) -> Self {
        Self {
            header,
            rows: Vec::new(),
            footer: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Trailing `# `-prefixed line.
    pub fn note(&mut self, line: String) {
        self.footer.push(line);
    }

    pub fn render(&self, format: Format) -> String {
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|c| c.render(format)).collect())
            .collect();
        let mut out = String::new();
        match format {
            Format::Csv => {
                out.push_str(&self.header.join(","));
                out.push('\n');
                for row in &cells {
                    out.push_str(&row.join(","));
                    out.push('\n');
                }
            }
            Format::Pretty => {
                let mut widths: Vec<usize> = self.header.iter().map(|h| h.len()).collect();
                for row in &cells {
                    for (w, c) in widths.iter_mut().zip(row) {
                        *w = (*w).max(c.len());
                    }
                }
                let line = |fields: Vec<&str>| {
                    let mut s = String::new();
                    for (i, (f, w)) in fields.iter().zip(&widths).enumerate() {
                        if i > 0 {
                            s.push_str("  ");
                        }
                        let _ = write!(s, "{f:>w$}");
                    }
                    s.push('\n');
                    s
                };
                out.push_str(&line(self.header.clone()));
                for row in &cells {
                    out.push_str(&line(row.iter().map(String::as_str).collect()));
                }
            }
        }
        for note in &self.footer {
            out.push_str("# ");
            out.push_str(note);
            out.push('\n');
        }
        out
    }
}
