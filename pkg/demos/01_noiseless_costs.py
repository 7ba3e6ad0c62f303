"""
What a word costs on a scanning keyboard
========================================

A scanning keyboard highlights one cell after another; a single switch
click picks first a row, then a cell inside it.  This script walks the
smallest interesting grid and counts what typing costs before any noise
enters the picture.
"""

from scansim import NoiseParams, build_fast, build_slow, builtin_layout, scans_pmf, time_pmf
from scansim.layout import FastParams, delay_schedule
from scansim.noise import ClickTiming, SwitchNoise

# The two-by-two training grid: row "a_" over row "t<-".  The underscore
# ends a word (and prints as a space); the arrow deletes.
layout = builtin_layout("grid2x2")
print("rows:", layout.rows)

# A practically noiseless parameter set: no latency, a vanishing click
# spread, no dropped clicks, no spurious clicks, one-second dwell.
params = NoiseParams(
    click_timing=ClickTiming(delta=0.0, sigma=1e-9),
    switch_noise=SwitchNoise(f=0.0, lam=0.0),
    t_scan=1.0,
)

# Every group scan opens with an audible tick, so the dwell schedule of a
# two-cell group has three entries: tick, first cell, second cell.
print("slow dwell schedule:", delay_schedule("slow", layout, params).durations)

# The standard mode: a click fires on the cell lit at that instant.
# Typing "a_" needs four passes (row, cell, row, cell) and nine scans.
chain = build_slow("a_", layout, params)
print("slow scans pmf:", dict(zip(scans_pmf(chain).support.tolist(), scans_pmf(chain).probs.tolist())))
print("slow duration pmf (dwell units):", time_pmf(chain).support.tolist())

# The fast mode: cells race past at a reduced dwell and the one click of
# the pass is decoded at the group's end.  Every cell of every group is
# now scanned, so the same word costs twelve scans -- but eight of them
# run at the fast dwell and only the four group-final holds stay slow.
fast = build_fast("a_", layout, FastParams(base=params, t_fast=0.5))
print("fast scans pmf:", dict(zip(scans_pmf(fast).support.tolist(), scans_pmf(fast).probs.tolist())))
print("fast duration pmf (fast dwell units):", time_pmf(fast).support.tolist())
print("fast duration in seconds:", [u * 0.5 for u in time_pmf(fast).support.tolist()])
