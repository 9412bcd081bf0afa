use decos::{BackendSelection, ModelSpec, Sampler, SamplerConfig};

fn main() -> decos::Result<()> {
    let cfg = SamplerConfig::new(20, 10_000, 7)
        .with_model(ModelSpec::EdgePenalty { alpha: 1.0 })
        .with_backend(BackendSelection::All);
    let mut sampler = Sampler::new(cfg)?;
    sampler.run_with(|rec| {
        if rec.applied {
            println!("{} {:?} ({}, {}) -> {} edges", rec.iteration, rec.kind, rec.x, rec.y, rec.edges);
        }
        Ok(())
    })?;
    Ok(())
}
