"""End-to-end evidence runs bundling witnesses, certificates and conjugacy diagnostics."""
import os

from .affine import build_aiet, check_compatibility
from .analysis import (
    bc_periodic, check_hs, derivative_profile, invariant_measure_estimate, semi_conjugacy,
    verify_bc, verify_hs,
)
from .birkhoff import bounded_times, certified_lower_sums, wandering_series
from .cocycle import InductionChain
from .core import specfile
from .instances import find_periodic_loop
from .io import write_csv, write_json
from .plotting import plot_conjugacy, plot_profile_trend, plot_slope_histogram, plot_wandering
from .sampling import instance_rng, random_points


def periodic_report(out, seed=0, periods=20, points=100, iet_points=10, levels=6, hs_steps=60, C=4.0,
                    series_len=2000, config=None):
    """Full run on the d=3 periodic-type instance; returns a summary dict."""
    config = dict(config or {}, seed=seed, periods=periods, points=points, levels=levels)
    os.makedirs(out, exist_ok=True)
    inst = find_periodic_loop()
    T0 = inst.iet()
    omega = inst.omega
    p = inst.period
    summary = {"period": p, "types": inst.types}

    write_json(os.path.join(out, "instance.json"), {
        "loop_types": inst.types, "loop_matrix": inst.matrix.rows,
        "perron_field": inst.field.descriptor(), "lengths": list(inst.lengths),
        "omega": list(omega), "stable_vector": list(inst.stable),
        "compatibility_defect": check_compatibility(T0, omega),
    }, config)

    ws, chain0 = bc_periodic(inst, periods)
    bc = ws[0]
    summary["bc_verified"] = verify_bc(T0, bc)
    write_json(os.path.join(out, "bc_witness.json"), dict(bc.to_dict(), verified=summary["bc_verified"]), config)

    hs = check_hs(T0, hs_steps, C=C)[0]
    summary["hs_verified"] = verify_hs(T0, hs)
    write_json(os.path.join(out, "hs_witness.json"), dict(hs.to_dict(), verified=summary["hs_verified"]), config)

    need = max(bc.rv_times[-1][1], p * levels) + 2 * p
    # the path must cover any depth the builder doubles to (each period holds a Zorich block)
    res = build_aiet(inst.repeated(max(need, 200) + 2), omega, depth=need, T0=T0)
    T = res.aiet
    specfile.dump(T, os.path.join(out, "aiet.json"))
    write_json(os.path.join(out, "build_report.json"), res.to_dict(), config)

    # bounded times for the AIET and for T0
    rng = instance_rng(seed, 0)
    chain = InductionChain(T, steps=bc.rv_times[-1][1])
    sums = chain.special_sums(T.omega)
    cert = []
    for x in random_points(rng, T, points):
        k = rng.randrange(len(bc.rv_times))
        cert.append(bounded_times(chain, x, k, bc, T.omega, sums=sums))
    sums0 = chain0.special_sums(omega)
    cert0 = []
    for x in random_points(rng, T0, iet_points):
        k = rng.randrange(len(bc.rv_times))
        cert0.append(bounded_times(chain0, x, k, bc, omega, sums=sums0))
    summary["certificates_hold"] = all(c.holds for c in cert + cert0)
    write_json(os.path.join(out, "bounded_times.json"), {
        "aiet": [c.to_dict() for c in cert], "iet": [c.to_dict() for c in cert0],
        "all_hold": summary["certificates_hold"],
    }, config)

    # series along certified times of one point, and the naive series
    x = random_points(rng, T, 1)[0]
    along = [bounded_times(chain, x, k, bc, T.omega, sums=sums) for k in range(len(bc.rv_times))]
    fw, bw = certified_lower_sums(along)
    ser = wandering_series(T, T.omega, x, series_len)
    summary["wandering_candidate"] = ser.candidate
    write_csv(os.path.join(out, "certified_sums.csv"), ["k", "m_k", "m_minus_k", "forward_lower", "backward_lower"],
              [(w.k, w.m_plus, w.m_minus, a, b) for w, a, b in zip(along, fw, bw)], config)
    write_csv(os.path.join(out, "wandering.csv"), ["n", "term", "partial_sum"],
              [(n, float(t), float(s)) for n, t, s in ser.rows()], config)
    plot_wandering(ser, os.path.join(out, "wandering.svg"))

    # conjugacy and derivative profile over period levels
    chT = InductionChain(T, steps=p * levels)
    ch0 = InductionChain(T0, steps=p * levels)
    prof, defects = [], []
    S = None
    for k in range(1, levels + 1):
        S = semi_conjugacy(T, T0, p * k, chains=(chT, ch0), seed=seed)
        dp = derivative_profile(S)
        prof.append(dp)
        defects.append({"level": S.level, "defect": S.defect, "sample_defect": S.sample_defect, "mesh": S.mesh})
    summary["defect_below_mesh"] = all(d["defect"] <= d["mesh"] for d in defects)
    write_csv(os.path.join(out, "conjugacy.csv"), ["x", "h", "slope"], S.rows(), config)
    meas = invariant_measure_estimate(S)
    write_json(os.path.join(out, "derivative_profile.json"), {
        "levels": prof, "defects": defects,
        "measure": {k: v for k, v in meas.items() if k != "masses"},
    }, config)
    plot_conjugacy(S, os.path.join(out, "conjugacy.svg"))
    plot_slope_histogram(S, os.path.join(out, "slopes.svg"))
    plot_profile_trend([d["level"] for d in prof], [d["profile"][0.1]["mass_slope_below"] for d in prof],
                       os.path.join(out, "profile_trend.svg"))
    summary["mass_slope_below_0.1"] = [d["profile"][0.1]["mass_slope_below"] for d in prof]
    summary["max_abs_sum"] = max(max(abs(c.s_plus), abs(c.s_minus)) for c in cert + cert0)
    summary["bound"] = cert[0].bound
    summary["eta_gap"] = res.gap
    write_json(os.path.join(out, "summary.json"), summary, config)
    return summary
