"""Print the conjugacy classes of subgroups isomorphic to F_2^5 in Sp_6(F_2),
U_63 and U_36, with the fixed-point conditions for each class."""
import time

from quartic_hasse.subgroups import check_star, ea32_classes, standard_stabilizer

for label in ("sp6", "u63", "u36"):
    t0 = time.perf_counter()
    classes = ea32_classes(label)
    print(f"{label}: order {standard_stabilizer(label).order}, "
          f"{len(classes)} classes ({time.perf_counter() - t0:.1f}s)")
    for k, cls in enumerate(classes, 1):
        E = cls.representative
        plus, minus = check_star(E, "+"), check_star(E, "-")
        print(f"  {k:2d} orbit {cls.orbit_size:5d}  (*)+ {plus.passed!s:5}  (*)- {minus.passed}")
