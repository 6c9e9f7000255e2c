use hblab::verify::{run_suite, SuiteConfig};

fn main() {
    let mut bad = 0;
    for seed in 0u64..32 {
        let cfg = SuiteConfig { seed, ..Default::default() };
        match run_suite("all", &cfg) {
            Ok(r) => {
                if !r.overall_pass {
                    bad += 1;
                    for f in r.instances.iter().filter(|i| !i.pass) {
                        println!("seed {seed} FAIL {} res {:?}", f.inputs, f.residuals);
                    }
                }
            }
            Err(e) => { bad += 1; println!("seed {seed}: ERROR {e}"); }
        }
    }
    println!("done, {bad} bad seeds of 32");
}
