"""Reference values for tests/test_specfun.cpp, computed with mpmath at 40 digits."""
import mpmath as mp

mp.mp.dps = 40
points = ["1e-6", "1e-3", "0.1", "0.5", "1", "2", "3.9", "4.1", "5", "7.5", "7.999", "8", "8.001",
          "10", "15", "20", "24.999", "25", "25.001", "30", "40", "50", "100", "1000"]
print("// z, J0, J1, Y0, Y1")
for s in points:
    z = mp.mpf(s)
    vals = [mp.besselj(0, z), mp.besselj(1, z), mp.bessely(0, z), mp.bessely(1, z)]
    print("{" + s + ", " + ", ".join(mp.nstr(v, 20, min_fixed=-5, max_fixed=5) for v in vals) + "},")
print("// zeros", mp.nstr(mp.besseljzero(0, 1), 20), mp.nstr(mp.besselyzero(0, 1), 20))
