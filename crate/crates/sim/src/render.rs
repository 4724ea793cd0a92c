//! Console text renderers: 4-space-indented JSON documents and the
//! fixed-width resources table.

use serde::Serialize;
use serde_json::ser::{PrettyFormatter, Serializer};

/// Serialize any value as JSON with 4-space indentation, preserving the
/// serializer's field order.
pub fn json_block<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let formatter = PrettyFormatter::with_indent(b"    ");
    let mut serializer = Serializer::with_formatter(&mut out, formatter);
    value
        .serialize(&mut serializer)
        .expect("console documents always serialize");
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

/// One row of the resources table.
pub struct ResourceRow {
    pub name: String,
    pub amount: f64,
    pub max: f64,
}

/// Render the resources table: columns `name`, `amount`, `max` plus an
/// unlabeled leading index column. Every cell is right-aligned to its
/// column width, columns are separated by two spaces, and quantities are
/// printed with six decimals.
pub fn resources_table(rows: &[ResourceRow]) -> String {
    let amounts: Vec<String> = rows.iter().map(|r| format!("{:.6}", r.amount)).collect();
    let maxes: Vec<String> = rows.iter().map(|r| format!("{:.6}", r.max)).collect();
    let indices: Vec<String> = (0..rows.len()).map(|i| i.to_string()).collect();

    let width = |header: &str, cells: &[String]| {
        cells
            .iter()
            .map(String::len)
            .chain(std::iter::once(header.len()))
            .max()
            .unwrap_or(0)
    };
    let idx_w = width("", &indices);
    let name_cells: Vec<String> = rows.iter().map(|r| r.name.clone()).collect();
    let name_w = width("name", &name_cells);
    let amount_w = width("amount", &amounts);
    let max_w = width("max", &maxes);

    let mut lines = vec![format!(
        "{:>idx_w$}  {:>name_w$}  {:>amount_w$}  {:>max_w$}",
        "", "name", "amount", "max"
    )];
    for (i, row) in rows.iter().enumerate() {
        lines.push(format!(
            "{:>idx_w$}  {:>name_w$}  {:>amount_w$}  {:>max_w$}",
            indices[i], row.name, amounts[i], maxes[i]
        ));
    }
    lines.join("\n")
}
