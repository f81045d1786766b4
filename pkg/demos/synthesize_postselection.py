# python3
"""Work backwards: pick the weak values first, then solve for a post-selection.

Each target (observable, value) pins one linear constraint on the bra; the
solver intersects them, prefers the answer with the fewest nonzero amplitudes,
and reports how well the reconstructed state reproduces the request.
"""

import math

import cheshire as ch

pair = ch.two_cat()
conv = pair.convention

# Ask for the full disembodiment pattern: photon 1 path on L, grin on R,
# photon 2 mirrored. Eight delta targets in total.
targets = []
for photon, (path_arm, grin_arm) in ((1, ("L", "R")), (2, ("R", "L"))):
    for arm in ("L", "R"):
        targets.append(ch.WeakValueTarget(
            ch.path_projector(conv, photon, arm), 1.0 if arm == path_arm else 0.0))
        targets.append(ch.WeakValueTarget(
            ch.grin_observable(conv, photon, arm), 1.0 if arm == grin_arm else 0.0))

problem = ch.assemble(pair.pre, targets)
post = ch.solve_post(problem)

print("synthesized post-selection (amplitudes scaled to max 1):")
for index, amp in sorted(post.amplitudes.items()):
    label = conv.label_of_index(index, letters=True)
    print(f"  |{label}>  {amp.real:+.6f}{amp.imag:+.6f}i")

residual = ch.verify(pair.pre, post, targets)
print(f"verification residual: {residual:.3e}")

overlap = ch.fidelity_up_to_phase(ch.normalize(post), pair.post)
print(f"match with the reference post-selection: {overlap:.15f}")
print()

# The same machinery answers "is this combination of weak values even
# possible?" Asking the left-path projector to be 1 and 0 at once leaves
# no post-selection at all.
try:
    bad = [
        ch.WeakValueTarget(ch.path_projector(conv, 1, "L"), 1.0),
        ch.WeakValueTarget(ch.path_projector(conv, 1, "L"), 0.0),
    ]
    ch.solve_post(ch.assemble(pair.pre, bad))
except ch.VacuousSelectionError as exc:
    print(f"contradictory request rejected: {exc}")

# And underdetermined requests come back with minimal support: a single
# target leaves a large solution space, so the solver picks the sparsest ray.
one = [ch.WeakValueTarget(ch.path_projector(conv, 1, "L"), 0.5)]
sparse = ch.solve_post(ch.assemble(pair.pre, one))
print(f"single target met with support size {len(sparse.amplitudes)}")
