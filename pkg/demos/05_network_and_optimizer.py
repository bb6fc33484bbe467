"""The function approximator: a 3x128 ReLU net under rmsprop with momentum.

Round 1 sees the 52-card hand; later rounds append the 36-bid history.
Outputs are predicted rewards (1 - cost) per action.  This demo fits a
net to random targets to show the optimizer converging, and verifies one
analytic gradient against finite differences.
"""

import numpy as np

from bridgebid.net import (Mlp, RmspropState, backward, masked_sq_loss,
                           rmsprop_step)

rng = np.random.default_rng(0)
net = Mlp.new(input_width=52, output_width=36, seed=0)
print("parameters:", sum(p.size for p in net.parameters()))

xs = (rng.random((100, 52)) < 0.25).astype(float)
ts = rng.random((100, 36))

state = RmspropState.for_params(net.parameters())
mask = np.ones((50, 36))
loss0, _ = masked_sq_loss(net.forward(xs), ts, np.ones_like(ts))
for step in range(1500):
    idx = rng.integers(0, 100, 50)
    _, grads = backward(net, xs[idx], ts[idx], mask)
    rmsprop_step(net.parameters(), grads, state)
    if step % 500 == 499:
        state.decay_lr()
loss1, _ = masked_sq_loss(net.forward(xs), ts, np.ones_like(ts))
print(f"loss {loss0:.2f} -> {loss1:.4f} after 1500 minibatch steps")

# one-parameter finite-difference check
x, t, m = xs[:4], ts[:4], np.ones((4, 36))
_, grads = backward(net, x, t, m)
w = net.weights[0]
h = 1e-4
orig = w[0, 0]
w[0, 0] = orig + h
up, _ = masked_sq_loss(net.forward(x), t, m)
w[0, 0] = orig - h
down, _ = masked_sq_loss(net.forward(x), t, m)
w[0, 0] = orig
fd = (up - down) / (2 * h)
print(f"analytic grad {grads[0][0, 0]:+.6f} vs finite difference {fd:+.6f}")
