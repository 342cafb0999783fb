//! Random models and reference fixtures.

use orchid::generators::{
    gen_configuration_counted, gen_hsbm, generate_collection, make_hypergrid, GeneratorSpec, Model,
};

fn main() -> orchid::Result<()> {
    let sample = gen_configuration_counted(&[3, 3, 2, 2, 2], &[3, 3, 3, 3], 1)?;
    println!("configuration model: {} ({} duplicate stubs dropped)", sample.hypergraph.structural_profile(false), sample.discarded);

    let hsbm = gen_hsbm(&[10, 10], &[8, 8], &[vec![0.4, 0.05], vec![0.05, 0.4]], 2)?;
    println!("hsbm: {}", hsbm.hypergraph.structural_profile(false));
    println!("  node communities {:?}", hsbm.node_communities);

    let grid = make_hypergrid(10, 3)?;
    println!("hypergrid: {}", grid.structural_profile(true));

    let specs: Vec<GeneratorSpec> = (0..4)
        .map(|seed| GeneratorSpec {
            model: Model::Er { n: 50, m: 40, p: 0.05 },
            seed,
        })
        .collect();
    println!("{}", serde_json::to_string(&specs[0]).unwrap());
    for (spec, h) in specs.iter().zip(generate_collection(&specs)?) {
        println!("er seed {}: {} incidences", spec.seed, h.incidence_count());
    }
    Ok(())
}
