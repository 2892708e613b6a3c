//! Human tables over the records stream.

use pointed_coh::records::Record;

use crate::Format;

pub fn render(records: &[Record], format: Format) -> String {
    match format {
        Format::Records => records.iter().map(|r| format!("{r}\n")).collect(),
        Format::Table => table(records),
    }
}

fn width(s: &str) -> usize {
    s.chars().count()
}

fn pad(s: &str, w: usize) -> String {
    format!("{s}{}", " ".repeat(w.saturating_sub(width(s))))
}

fn table(records: &[Record]) -> String {
    let mut out = String::new();
    let mut i = 0;
    while i < records.len() {
        let kind = records[i].kind().unwrap_or("");
        let mut j = i;
        while j < records.len() && records[j].kind().unwrap_or("") == kind {
            j += 1;
        }
        let group = &records[i..j];
        if kind == "note" {
            for r in group {
                out.push_str(r.get("text").unwrap_or(""));
                out.push('\n');
            }
        } else if group.len() == 1 {
            out.push_str(&format!("[{kind}]\n"));
            let fields: Vec<&(String, String)> = group[0].fields().iter().skip(1).collect();
            let w = fields.iter().map(|(k, _)| width(k)).max().unwrap_or(0);
            for (k, v) in fields {
                out.push_str(&format!("  {}  {v}\n", pad(k, w)));
            }
        } else {
            out.push_str(&format!("[{kind}]\n"));
            let mut keys: Vec<&str> = Vec::new();
            for r in group {
                for (k, _) in r.fields().iter().skip(1) {
                    if !keys.contains(&k.as_str()) {
                        keys.push(k);
                    }
                }
            }
            let cell = |r: &Record, k: &str| r.get(k).unwrap_or("").to_string();
            let widths: Vec<usize> = keys
                .iter()
                .map(|k| group.iter().map(|r| width(&cell(r, k))).chain([width(k)]).max().unwrap_or(0))
                .collect();
            let line = |cells: Vec<String>| {
                let parts: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| pad(c, *w)).collect();
                format!("  {}\n", parts.join("  ").trim_end())
            };
            out.push_str(&line(keys.iter().map(|k| k.to_string()).collect()));
            for r in group {
                out.push_str(&line(keys.iter().map(|k| cell(r, k)).collect()));
            }
        }
        i = j;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn groups_records_by_kind() {
        let rs = vec![
            Record::new("ext").text("degree", 0).text("dim", 1),
            Record::new("ext").text("degree", 1).text("dim", 0),
            Record::new("note").text("text", "MATCH"),
        ];
        let t = render(&rs, Format::Table);
        assert_eq!(t, "[ext]\n  degree  dim\n  0       1\n  1       0\nMATCH\n");
        let r = render(&rs, Format::Records);
        assert_eq!(r.lines().count(), 3);
    }
}
