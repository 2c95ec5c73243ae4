#!/usr/bin/env python3
# Copyright 2026 The prodinv Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#
# Independent oracle for the frozen expected values used in the C++ tests.
#
# Integrates the state system with mpmath's arbitrary-precision Taylor ODE
# solver under *feedback* rules (stop producing while stock remains, repay
# while debt remains) and locates switching instants by root finding on the
# integrated solution. No closed-form switching time or objective formula is
# used anywhere in this file.
import mpmath as mp

mp.mp.dps = 30

BASE = dict(p=10, r=mp.mpf('0.1'), A=2, alpha=mp.mpf('0.5'), K=3, B=5,
            u_max=8, v_max=50, w_max=5, S_max=100, T=10)


def rhs(P, ctrl):
    def f(t, y):
        N, D, S = y
        u, v, w = ctrl(t, y)
        return [P['p'] * w - v - P['K'] * u - P['B'],
                P['r'] * D + P['A'] * u - v,
                u - w - P['alpha'] * S]
    return f


def run(P, y0, phases):
    """phases: list of (control(t,y), event(y) or None). Each phase runs until
    its event component hits zero (found by root finding) or until T."""
    t0, y, events = mp.mpf(0), list(map(mp.mpf, y0)), []
    for ctrl, ev in phases:
        sol = mp.odefun(rhs(P, ctrl), t0, y)
        if ev is None:
            t1 = mp.mpf(P['T'])
        else:
            g = lambda t: ev(sol(t))
            if g(mp.mpf(P['T'])) > 0:
                t1 = mp.mpf(P['T'])
            else:
                t1 = mp.findroot(g, (t0, mp.mpf(P['T'])), solver='anderson')
        events.append(t1)
        y = sol(t1)
        t0 = t1
        if t0 >= P['T']:
            break
    if t0 < P['T']:
        y = mp.odefun(rhs(P, phases[-1][0]), t0, y)(mp.mpf(P['T']))
    return events, y


def show(name, events, y):
    print(name, 'events=', [mp.nstr(e, 15) for e in events],
          'N(T)-D(T)=', mp.nstr(y[0] - y[1], 15), 'state(T)=', [mp.nstr(c, 8) for c in y])


P = BASE
w, A, K, B, p = P['w_max'], P['A'], P['K'], P['B'], P['p']
vmax = P['v_max']
S_zero = lambda y: y[2]
D_zero = lambda y: y[1]

# S1: sell stock without producing, then produce at demand rate paying A*u.
ev, y = run(P, (20, 0, 10), [
    (lambda t, y: (0, 0, w), S_zero),
    (lambda t, y: (w, A * w, w), None)])
show('S1', ev, y)

# S2 (t_D < t_S): repay at v_max, then repay only new purchases (A*u).
ev, y = run(P, (20, 10, 10), [
    (lambda t, y: (0, vmax, w), D_zero),
    (lambda t, y: (0, 0, w), S_zero),
    (lambda t, y: (w, A * w, w), None)])
show('S2', ev, y)

# S3: produce from the start, repay at v_max until debt clears.
ev, y = run(P, (20, 10, 0), [
    (lambda t, y: (w, vmax, w), D_zero),
    (lambda t, y: (w, A * w, w), None)])
show('S3', ev, y)

# A2: jump (20,30,10) -> (0,10,10); repay all sales profit until debt clears.
ev, y = run(P, (0, 10, 10), [
    (lambda t, y: (0, p * w - B, w), D_zero),
    (lambda t, y: (0, 0, w), S_zero),
    (lambda t, y: (w, A * w, w), None)])
show('A2', ev, y)

# A1: jump (20,10,10) -> (10,0,10) then S1 rules.
ev, y = run(P, (10, 0, 10), [
    (lambda t, y: (0, 0, w), S_zero),
    (lambda t, y: (w, A * w, w), None)])
show('A1', ev, y)

# Stock-only depletion beyond horizon example: S0 = 5 (e^5 - 1)/0.5 + 1.
S0 = 5 * (mp.e ** 5 - 1) / mp.mpf('0.5') + 1
sol = mp.odefun(lambda t, y: [-P['alpha'] * y[0] - w], 0, [S0])
print('beyond-horizon S0=', mp.nstr(S0, 12), 'S(T)=', mp.nstr(sol(10)[0], 12))
