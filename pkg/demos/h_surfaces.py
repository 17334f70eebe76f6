"""H-surfaces in R^3 built from harmonic maps.

A harmonic map f with frame data (alpha, beta) integrates to a surface X with
X_x = beta, X_y = -alpha solving X_xx + X_yy = -2 X_x x X_y.  Dilating by
sqrt(3)/2 produces a solution of the Wente equation (H = -2/sqrt 3).  The
surface-level transform commutes with the map-level one up to translation.

Run:  python3 demos/h_surfaces.py [out.obj]
"""
import sys

import numpy as np

from s3h import (Grid, clifford_map, clifford_params, dilate, eps_transform, h_eps_transform,
                 h_from_harmonic, harmonic_from_h, procrustes_o4)
from s3h.grid import interior_sup_norm
from s3h.hsurface import WENTE_LAMBDA, holo_residual, wente_residual
from s3h.io import write_obj

torus = clifford_map(clifford_params(0.6, 0.4))
for n in (33, 65, 129):
    g = Grid.from_bounds(0.0, 1.0, 0.0, 1.0, n, n)
    surf = h_from_harmonic(torus.frame(g))
    r = interior_sup_norm(wente_residual(surf))
    print(f"n = {n:3d}: H = -1 residual {r:.2e} = {r / g.h ** 2:.2f} h^2")

g = Grid.from_bounds(0.0, 1.0, 0.0, 1.0, 64, 64)
frame = torus.frame(g)
surf = h_from_harmonic(frame)
w = dilate(surf, WENTE_LAMBDA)
print(f"dilated: H = {w.H:.6f}, residual {interior_sup_norm(wente_residual(w)):.2e}")
print(f"dbar of the holomorphic differential: {interior_sup_norm(holo_residual(surf)):.2e}")

a = h_from_harmonic(eps_transform(frame, 1).result).X.values
b = h_eps_transform(surf, 1).X.values
d = a - b
print(f"transform square: translation {d[0, 0].round(6)}, deviation {np.abs(d - d[0, 0]).max():.1e}")

back = harmonic_from_h(surf)
print(f"surface -> map round trip: Procrustes residual {procrustes_o4(back.f, frame.f).residual:.1e}")

if len(sys.argv) > 1:
    write_obj(sys.argv[1], w.X.values)
    print(f"wrote {sys.argv[1]}")
