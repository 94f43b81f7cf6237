//! Markdown/CSV table emitters. CSV is the canonical machine format;
//! markdown is for eyeballs.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Md,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "md" => Ok(Format::Md),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format {other:?} (expected md or csv)")),
        }
    }
}

pub struct Table {
    pub name: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &'static str, columns: &[&'static str]) -> Self {
        Table {
            name,
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.columns.len(), "row arity in table {}", self.name);
        self.rows.push(row);
    }

    pub fn emit(&self, format: Format) -> String {
        match format {
            Format::Csv => self.emit_csv(),
            Format::Md => self.emit_md(),
        }
    }

    fn emit_csv(&self) -> String {
        let mut out = format!("# {}\n{}\n", self.name, self.columns.join(","));
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    fn emit_md(&self) -> String {
        let mut out = format!("### {}\n\n| {} |\n", self.name, self.columns.join(" | "));
        out.push_str(&format!("|{}\n", " --- |".repeat(self.columns.len())));
        for row in &self.rows {
            out.push_str(&format!("| {} |\n", row.join(" | ")));
        }
        out.push('\n');
        out
    }
}

pub fn secs(d: std::time::Duration) -> String {
    format!("{:.4}", d.as_secs_f64())
}

pub fn num(v: f64) -> String {
    format!("{v:.4}")
}
