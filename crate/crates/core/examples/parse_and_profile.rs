//! Parse an edge list, inspect its structure and expansions.
//!
//! ```text
//! cargo run --example parse_and_profile
//! ```

use orchid::hypergraph::parse_hypergraph;

const COAUTHORS: &str = "\
# one paper per line
ada, grace, alan
grace edsger
alan edsger barbara
barbara ada
ken
";

fn main() -> orchid::Result<()> {
    let h = parse_hypergraph(COAUTHORS)?;
    println!("{}", h.structural_profile(true));

    for i in 0..h.node_count() {
        let nb: Vec<&str> = h.neighbors(i).iter().map(|&j| h.label(j)).collect();
        println!("{:>8}  degree {}  neighbors {:?}", h.label(i), h.degree(i), nb);
    }

    let ada = 0;
    let dist = h.distances_from(ada, None)?;
    for (j, d) in dist {
        println!("d(ada, {}) = {d}", h.label(j));
    }

    let clique = h.clique_expansion(true);
    println!("clique expansion: {} weighted edges", clique.edges.len());
    let star = h.star_expansion();
    println!("star expansion: {} nodes, {} links", star.node_count, star.edges.len());

    print!("{}", h.to_edge_list());
    Ok(())
}
