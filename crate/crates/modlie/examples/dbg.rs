use modlie::liealg;
use modlie::modules::{baby_verma, radical_generators, radical, socle, iso_test};

fn main() {
    let alg = liealg::sl2s(5);
    let fq = alg.prime_field();
    let gens = radical_generators(&alg).unwrap();
    let omega = liealg::cartan_involution(&alg);
    for m in 0..5u64 {
        let zp = baby_verma(&alg, m, true).unwrap();
        let e = &zp.matrices()[0];
        let f = &zp.matrices()[2];
        let eranks: Vec<usize> = (1..5).map(|j| e.pow(j, &fq).rank(&fq)).collect();
        let franks: Vec<usize> = (1..5).map(|j| f.pow(j, &fq).rank(&fq)).collect();
        println!("Z'({m}): e-ranks {eranks:?} f-ranks {franks:?}");
    }
    // Z(i)^omega vs Z'(p-i)
    for i in 0..5u64 {
        let z = baby_verma(&alg, i, false).unwrap();
        let ztw = z.twist(&omega).unwrap();
        let zp = baby_verma(&alg, (5 - i) % 5, true).unwrap();
        let verdict = iso_test(&ztw, &zp, 3, 64).unwrap();
        println!("Z({i})^w ~ Z'({}): {}", (5 - i) % 5, verdict.is_iso());
    }
    // Z'(i+2)/Soc vs twist of RadZ(i)
    for i in 0..2u64 {
        let z = baby_verma(&alg, i, false).unwrap();
        let rad = radical(&z, &gens, &fq);
        let radm = z.submodule_module(&rad, "radZ").unwrap();
        let zp = baby_verma(&alg, i + 2, true).unwrap();
        let soc = socle(&zp, &gens, &fq);
        println!("soc(Z'({})) dim {}", i + 2, soc.dim());
        let (zms, _) = zp.quotient_module(&soc, "zs").unwrap();
        let radtw = radm.twist(&omega).unwrap();
        println!("  Z'/soc ~ radZ^w: {}", iso_test(&zms, &radtw, 3, 64).unwrap().is_iso());
        println!("  Z'/soc ~ radZ:   {}", iso_test(&zms, &radm, 3, 64).unwrap().is_iso());
    }
}
