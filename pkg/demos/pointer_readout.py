# python3
"""Read a weak value off a simulated measurement pointer.

A Gaussian pointer couples to one observable with strength g. After
post-selection the pointer's mean position has moved by g times the real
part of the weak value, up to corrections of order g^2. Halving g four
times makes the correction shrink quadratically, which is the signature
that the readout is operating in the weak regime. The imaginary part
shows up in the pointer's momentum instead.
"""

import cheshire as ch

pair = ch.two_cat()
conv = pair.convention

for descriptor in ("path:1:L", "grin:1:R", "grin:1:L"):
    obs = ch.observable_from_descriptor(conv, descriptor)
    w = ch.weak_value(obs, pair)
    print(f"observable {descriptor}: weak value {w.real:+.6f}{w.imag:+.6f}i")
    print("        g    shift/g        |shift/g - Re w|")
    g = 4e-2
    for _ in range(5):
        cfg = ch.PointerConfig(g=g, sigma_p=0.5)
        mean_x, _ = ch.pointer_shift(obs, pair, cfg)
        print(f"  {g:.5f}  {mean_x / g:+.9f}  {abs(mean_x / g - w.real):.3e}")
        g /= 2
    print()

# A complex weak value: pre and post selections that disagree about the
# relative path phase give the left-path projector weak value (1 + i)/2.
conv1 = ch.BasisConvention(1)
pre = ch.normalize(ch.make_ket(conv1, {0: 1.0, 2: 1.0}))
post = ch.normalize(ch.make_ket(conv1, {0: 1.0, 2: 1j}))
pair1 = ch.pair_from_states(pre, post)
obs = ch.path_projector(conv1, 1, "L")
w = ch.weak_value(obs, pair1)
print(f"complex case: weak value {w.real:+.4f}{w.imag:+.4f}i")

g = 1e-2
cfg = ch.PointerConfig(g=g, sigma_p=0.5)
mean_x, mean_p = ch.pointer_shift(obs, pair1, cfg)
print(f"position reads Re: {mean_x / g:+.6f}")
print(f"momentum reads Im: {mean_p / (2 * g * cfg.sigma_p ** 2):+.6f}")
