"""Four ways to run the traffic lights of a small city.

A 4x4 grid of intersections with an arterial demand corridor, served by:
a demand-proportional fixed cycle (the central regulator), naive
longest-queue-first, selfish local waiting-time minimization, and the
other-regarding variant that immediately clears any queue threatening to
spill back onto its neighbors.

Run:  python demos/traffic_demo.py [seeds]
"""
import sys
import statistics

from sociolab.traffic import Strategy, simulate_traffic

LABELS = {
    Strategy.FIXED_CYCLE: "central fixed cycle",
    Strategy.LONGEST_QUEUE_FIRST: "longest queue first",
    Strategy.LOCAL_WAIT_MIN: "selfish local wait-min",
    Strategy.SELF_REGULATING: "other-regarding self-reg",
}


def main() -> None:
    seeds = range(int(sys.argv[1]) if len(sys.argv) > 1 else 3)
    print("median time-averaged vehicles queued in the network "
          f"({len(list(seeds))} seeds per cell)\n")
    print(f"{'strategy':<26} {'light (u=0.3)':>14} {'rush hour (u=0.85)':>19}")
    medians = {}
    for strat in Strategy:
        row = []
        for u in (0.3, 0.85):
            vals = [simulate_traffic(strat, u, s).avg_total_queue
                    for s in seeds]
            med = statistics.median(vals)
            medians[(strat, u)] = med
            row.append(med)
        print(f"{LABELS[strat]:<26} {row[0]:>14.1f} {row[1]:>19.1f}")

    print("\nat light traffic, any adaptive scheme beats the fixed cycle;")
    print("at rush hour the purely local optimizers drown in their own")
    print("spillback, while the other-regarding rule -- identical except")
    print("for clearing critical queues to protect its neighbors -- keeps")
    print("the network fluid and beats even the central regulator.")


if __name__ == "__main__":
    main()
