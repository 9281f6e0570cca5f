//! Reader for tagged query files: `# cell: <id>` lines label the query that follows.

/// One query of a corpus file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub cell: Option<String>,
    /// 1-based line of the query text.
    pub line: usize,
    pub source: String,
}

/// Splits a corpus into queries. Blank lines and other `#` comments are skipped;
/// a tag applies to the next query only.
pub fn read(text: &str) -> Vec<Entry> {
    let mut out = Vec::new();
    let mut cell = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(tag) = comment.trim().strip_prefix("cell:") {
                cell = Some(tag.trim().to_string());
            }
            continue;
        }
        out.push(Entry {
            cell: cell.take(),
            line: i + 1,
            source: line.to_string(),
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tags_attach_to_the_next_query() {
        let entries = read("# header\n# cell: x.1\nLOOKUP w OF node:a AT t=1\n\nPAIRS(PATH)\n");
        assert_eq!(entries.len(), 2);
        assert_eq!(entries[0].cell.as_deref(), Some("x.1"));
        assert_eq!(entries[0].line, 3);
        assert_eq!(entries[1].cell, None);
    }
}
