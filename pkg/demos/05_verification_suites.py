"""Running the seeded verification batteries from Python."""
from tcpkit import suites

for name in ("kernels", "m2oracle", "thm33"):
    res = suites.SUITES[name](seed=42)
    print(res.summary_record())

parts = [suites.thm31(trials=60), suites.thm32(trials=60)]
print(suites.prop21(parts).summary_record())
