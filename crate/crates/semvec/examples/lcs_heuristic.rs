//! The longest-common-substring similarity heuristic on its own: share
//! a run longer than three code points and score its length over ten.
//!
//! ```bash
//! cargo run --example lcs_heuristic
//! ```

use semvec::{lcs_similarity, longest_common_substring};

fn main() {
    let pairs = [
        ("благоразумие", "благоразумность"),
        ("молоко", "молочный"),
        ("кот", "котик"),
        ("кот", "дом"),
        ("электростанция", "гидроэлектростанция"),
    ];
    println!("{:<16} {:<20} {:>6}  shared run", "word1", "word2", "score");
    for (a, b) in pairs {
        let run = longest_common_substring(a, b);
        println!(
            "{a:<16} {b:<20} {:>6.2}  {:?} ({} letters)",
            lcs_similarity(a, b),
            run,
            run.chars().count()
        );
    }
    println!("\n(\"кот\"/\"котик\" share only 3 letters — not more than 3, so 0)");
}
