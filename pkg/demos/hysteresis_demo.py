"""Bistability of cooperation on the homogeneous lattice.

Everyone shares one externally set friendliness; no noise, no births. The
friendliness is ramped up from an all-defect state, then back down from
the cooperative state it reaches. In between the two switch points the
lattice is bistable: where you end up depends on where you came from.

Run:  python demos/hysteresis_demo.py
"""
from sociolab import PayoffMatrix
from sociolab.experiments import hysteresis_sweep


def main() -> None:
    mat = PayoffMatrix()
    values = [round(0.02 * i, 3) for i in range(26)]   # 0 .. 0.50
    print("sweeping friendliness 0 -> 0.5 -> 0 on a 50x50 lattice ...")
    rows = hysteresis_sweep(values)
    asc = {r.rho: r.coop_fraction for r in rows if r.direction == "ascending"}
    desc = {r.rho: r.coop_fraction for r in rows if r.direction == "descending"}

    print(f"\n{'rho':>6} {'up-leg':>7} {'down-leg':>9}")
    for v in values:
        marker = "  <- bistable" if asc[v] == 0.0 and desc[v] == 1.0 else ""
        print(f"{v:>6.2f} {asc[v]:>7.2f} {desc[v]:>9.2f}{marker}")

    band = [v for v in values if asc[v] == 0.0 and desc[v] == 1.0]
    print(f"\nalways-defect threshold:    {mat.lower_threshold:.4f}")
    print(f"always-cooperate threshold: {mat.upper_threshold:.4f}")
    if band:
        print(f"bistable band observed:     {min(band):.2f} .. {max(band):.2f}")
        print("inside the band, history decides: a cooperative past sustains "
              "cooperation at friendliness levels where it could never start")


if __name__ == "__main__":
    main()
