//! ASCII heap-of-pieces rendering of traces.
//!
//! One row per normal-form clique, bottom row first in the heap (so last in
//! the printed text), one column per alphabet letter.

use crate::trace::Trace;

/// Deterministic text rendering. The empty trace renders as an empty string.
pub fn render_heap(x: &Trace) -> String {
    let alphabet = x.alphabet();
    if x.is_empty() {
        return String::new();
    }
    let widths: Vec<usize> =
        alphabet.letters().map(|l| alphabet.name(l).chars().count()).collect();
    let mut lines = Vec::with_capacity(x.height() + 1);
    for c in x.cliques().iter().rev() {
        let mut row = String::new();
        for l in alphabet.letters() {
            if !row.is_empty() {
                row.push(' ');
            }
            let w = widths[l.index()];
            if c.contains(l) {
                row.push_str(alphabet.name(l));
            } else {
                row.push_str(&" ".repeat(w));
            }
        }
        lines.push(row.trim_end().to_string());
    }
    let total: usize = widths.iter().sum::<usize>() + widths.len().saturating_sub(1);
    lines.push("-".repeat(total));
    lines.join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::trace::Trace;

    #[test]
    fn empty_trace_renders_empty() {
        let al = fixtures::m2();
        assert_eq!(render_heap(&Trace::empty(al)), "");
    }

    #[test]
    fn single_letter() {
        let al = fixtures::m1();
        let x = Trace::parse(al, "a").unwrap();
        assert_eq!(render_heap(&x), "a\n-------");
    }

    #[test]
    fn figure_trace_has_four_layers() {
        let al = fixtures::m2();
        let x = Trace::parse(al, "a0 a3 a0 a2 a1 a3 a4").unwrap();
        let rendered = render_heap(&x);
        let lines: Vec<&str> = rendered.lines().collect();
        assert_eq!(lines.len(), 5); // four layers plus the ground line
        assert_eq!(lines[0].trim(), "a4");
        assert_eq!(lines[1].split_whitespace().collect::<Vec<_>>(), vec!["a1", "a3"]);
        assert_eq!(lines[2].split_whitespace().collect::<Vec<_>>(), vec!["a0", "a2"]);
        assert_eq!(lines[3].split_whitespace().collect::<Vec<_>>(), vec!["a0", "a3"]);
    }
}
