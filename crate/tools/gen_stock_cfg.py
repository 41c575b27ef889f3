#!/usr/bin/env python3
"""Emit the stock darknet-style config fixture.

A CSPDarknet53+SPP+PAN-shaped network description: 162 [convolutional]
sections among the usual route/shortcut/maxpool/upsample/yolo plumbing,
with deliberately mixed formatting (comments, blank lines, spacing) so the
byte-identical round-trip test exercises more than the happy path.
"""

from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "crates" / "core" / "tests" / "fixtures" / "stock.cfg"

lines = []


def conv(filters, size, stride=1, activation="mish", spaced=False):
    eq = " = " if spaced else "="
    lines.append("[convolutional]")
    lines.append(f"batch_normalize{eq}1")
    lines.append(f"filters{eq}{filters}")
    lines.append(f"size{eq}{size}")
    lines.append(f"stride{eq}{stride}")
    lines.append(f"pad{eq}1")
    lines.append(f"activation{eq}{activation}")
    lines.append("")


def shortcut(offset=-3):
    lines.append("[shortcut]")
    lines.append(f"from={offset}")
    lines.append("activation=linear")
    lines.append("")


def route(layers):
    lines.append("[route]")
    lines.append(f"layers = {layers}")
    lines.append("")


lines.append("# generated network description fixture")
lines.append("[net]")
lines.append("batch=64")
lines.append("subdivisions=16")
lines.append("width=416")
lines.append("height=416")
lines.append("channels=3")
lines.append("momentum=0.949")
lines.append("decay=0.0005")
lines.append("learning_rate=0.001")
lines.append("burn_in=1000")
lines.append("max_batches=20000")
lines.append("policy=steps")
lines.append("steps=16000,18000")
lines.append("scales=.1,.1")
lines.append("")

conv_count = 0


def c(filters, size, stride=1, activation="mish", spaced=False):
    global conv_count
    conv(filters, size, stride, activation, spaced)
    conv_count += 1


# backbone: stem + 5 stages with (1, 2, 8, 8, 4) residual blocks
c(32, 3)
for stage, (blocks, filters) in enumerate([(1, 64), (2, 128), (8, 256), (8, 512), (4, 1024)]):
    c(filters, 3, stride=2)
    c(filters // 2 if blocks > 1 else filters, 1)
    route("-2")
    c(filters // 2 if blocks > 1 else filters, 1)
    for _ in range(blocks):
        c(filters // 2, 1, spaced=(stage == 2))
        c(filters // 2 if blocks > 1 else filters, 3)
        shortcut()
    c(filters // 2 if blocks > 1 else filters, 1)
    route("-1,-10" if blocks > 2 else "-1,-7")
    c(filters, 1)

# head: SPP block
lines.append("# spp")
c(512, 1, activation="leaky")
c(1024, 3, activation="leaky")
c(512, 1, activation="leaky")
for k in (5, 9, 13):
    lines.append("[maxpool]")
    lines.append("stride=1")
    lines.append(f"size={k}")
    lines.append("")
    if k != 13:
        route("-2" if k == 5 else "-4")
route("-1,-3,-5,-6")
c(512, 1, activation="leaky")
c(1024, 3, activation="leaky")
c(512, 1, activation="leaky")

# PAN neck + three yolo heads
for head, (filters, anchors_mask) in enumerate(
    [(256, "0,1,2"), (512, "3,4,5"), (1024, "6,7,8")]
):
    if head > 0:
        c(filters // 2, 1, activation="leaky")
        lines.append("[upsample]" if head == 0 else "[upsample]")
        lines.append("stride=2")
        lines.append("")
        route("-1, 61" if head == 1 else "-1, 23")
    for _ in range(3):
        c(filters // 2, 1, activation="leaky")
        c(filters, 3, activation="leaky")
    c(filters // 2, 1, activation="leaky")
    c(filters, 3, activation="leaky")
    c(45, 1, activation="linear")
    lines.append("[yolo]")
    lines.append(f"mask = {anchors_mask}")
    lines.append("anchors = 12,16, 19,36, 40,28, 36,75, 76,55, 72,146, 142,110, 192,243, 459,401")
    lines.append("classes=10")
    lines.append("num=9")
    lines.append("jitter=.3")
    lines.append("ignore_thresh = .7")
    lines.append("truth_thresh = 1")
    lines.append("random=1")
    lines.append("")

# pad with extra downsample convolutions until exactly 162 [convolutional]
while conv_count < 162:
    c(128, 3, activation="leaky")

text = "\n".join(lines)
if not text.endswith("\n"):
    text += "\n"
OUT.write_text(text)
print(f"{conv_count} convolutional sections -> {OUT}")
assert conv_count == 162, conv_count
