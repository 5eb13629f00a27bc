import init, { defect_curve, odometer_tower, recurrence_histogram } from "./pkg/ergoflow_web.js";

const $ = (id) => document.getElementById(id);

function guard(msgId, f) {
  const msg = $(msgId);
  msg.className = "note";
  try {
    f(msg);
  } catch (e) {
    msg.className = "err";
    msg.textContent = String(e);
  }
}

function axes(ctx, w, h, pad) {
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#888";
  ctx.beginPath();
  ctx.moveTo(pad, pad);
  ctx.lineTo(pad, h - pad);
  ctx.lineTo(w - pad, h - pad);
  ctx.stroke();
}

function plotDefects() {
  guard("dmsg", (msg) => {
    const data = JSON.parse(defect_curve(+$("dl").value, $("dlam").value, +$("dlen").value));
    const c = $("dcanvas"), ctx = c.getContext("2d"), pad = 40;
    axes(ctx, c.width, c.height, pad);
    const pts = data.points;
    const logs = pts.flatMap((p) => [Math.log10(+p.worst), Math.log10(+p.bound)]).filter(Number.isFinite);
    const lo = Math.min(...logs), hi = Math.max(...logs, 0.5);
    const x = (i) => pad + (i / Math.max(pts.length - 1, 1)) * (c.width - 2 * pad);
    const y = (v) => c.height - pad - ((Math.log10(v) - lo) / (hi - lo || 1)) * (c.height - 2 * pad);
    for (const [key, color] of [["bound", "#c33"], ["worst", "#236"]]) {
      ctx.strokeStyle = color;
      ctx.beginPath();
      pts.forEach((p, i) => (i ? ctx.lineTo(x(i), y(+p[key])) : ctx.moveTo(x(i), y(+p[key]))));
      ctx.stroke();
    }
    ctx.fillStyle = "#222";
    ctx.fillText(`log10 scale, ${lo.toFixed(1)} to ${hi.toFixed(1)}`, pad + 4, pad - 8);
    const last = pts[pts.length - 1];
    msg.textContent = `span ${last.span}: worst defect ${last.worst}, bound ${last.bound} (blue: defect, red: bound)`;
  });
}

function drawTower() {
  guard("tmsg", (msg) => {
    const data = JSON.parse(odometer_tower(+$("tk").value, +$("tn").value));
    const c = $("tcanvas"), ctx = c.getContext("2d");
    ctx.clearRect(0, 0, c.width, c.height);
    const cells = data.cells, n = cells.length;
    const cols = Math.ceil(Math.sqrt(n * 3)), rows = Math.ceil(n / cols);
    const cw = (c.width - 20) / cols, ch = Math.min(48, (c.height - 20) / rows);
    const parent = +data.parent_period;
    cells.forEach((cell, i) => {
      const px = 10 + (i % cols) * cw, py = 10 + Math.floor(i / cols) * ch;
      const hue = ((i % parent) * 360) / parent;
      ctx.fillStyle = `hsl(${hue} 60% 80%)`;
      ctx.fillRect(px + 1, py + 1, cw - 2, ch - 2);
      ctx.fillStyle = "#222";
      ctx.font = `${Math.max(8, Math.min(12, cw / 7))}px monospace`;
      ctx.fillText(`${cell.index}`, px + 4, py + 12);
      if (ch > 28) ctx.fillText(cell.label, px + 4, py + 26);
    });
    msg.textContent = `period ${data.period}; cells in A_n order, coloured by parent cell of level n-1 (period ${parent})`;
  });
}

function drawHistogram() {
  guard("rmsg", (msg) => {
    const data = JSON.parse(
      recurrence_histogram(+$("rk").value, +$("rs").value, +$("rn").value, BigInt($("rseed").value))
    );
    const c = $("rcanvas"), ctx = c.getContext("2d"), pad = 30;
    axes(ctx, c.width, c.height, pad);
    const hist = data.histogram, top = Math.max(...hist);
    const bw = (c.width - 2 * pad) / hist.length;
    ctx.fillStyle = "#2a6";
    hist.forEach((v, i) => {
      const h = (v / top) * (c.height - 2 * pad);
      ctx.fillRect(pad + i * bw, c.height - pad - h, Math.max(bw - 1, 1), h);
    });
    msg.textContent = `hits per pair: min ${data.min}, mean ${data.mean.toFixed(2)}, max ${data.max}; ` +
      `frequency at n = 1: ${data.first_frequency.toFixed(4)} (1/k = ${(1 / data.k).toFixed(4)})`;
  });
}

await init();
$("dgo").onclick = plotDefects;
$("tgo").onclick = drawTower;
$("rgo").onclick = drawHistogram;
plotDefects();
drawTower();
drawHistogram();
