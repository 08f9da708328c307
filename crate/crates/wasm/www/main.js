import init, { device_report, transfer_curve, decoherence_curves } from "./pkg/qcav_wasm.js";

const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

const num = (id) => Number(document.getElementById(id).value);

// data: times followed by equal-length curve blocks
function split(data, curves) {
  const n = data.length / (curves + 1);
  const blocks = [];
  for (let i = 0; i <= curves; i++) blocks.push(data.subarray(i * n, (i + 1) * n));
  return blocks;
}

function plot(canvas, times, curves, labels) {
  const ctx = canvas.getContext("2d");
  const { width, height } = canvas;
  const pad = 40;
  ctx.clearRect(0, 0, width, height);
  const t0 = times[0];
  const t1 = times[times.length - 1];
  const x = (t) => pad + ((t - t0) / (t1 - t0)) * (width - 2 * pad);
  const y = (v) => height - pad - v * (height - 2 * pad);

  ctx.strokeStyle = "#888";
  ctx.strokeRect(pad, pad, width - 2 * pad, height - 2 * pad);
  ctx.fillStyle = "#333";
  ctx.font = "12px sans-serif";
  ctx.fillText("1", pad - 14, y(1) + 4);
  ctx.fillText("0", pad - 14, y(0) + 4);
  ctx.fillText(t1.toPrecision(3), width - pad - 20, height - pad + 16);

  curves.forEach((c, k) => {
    ctx.strokeStyle = COLORS[k % COLORS.length];
    ctx.setLineDash(labels[k] === "evolution" ? [6, 4] : []);
    ctx.beginPath();
    c.forEach((v, i) => (i ? ctx.lineTo(x(times[i]), y(v)) : ctx.moveTo(x(times[i]), y(v))));
    ctx.stroke();
    ctx.fillStyle = ctx.strokeStyle;
    ctx.fillText(labels[k], width - pad - 110, pad + 16 + 14 * k);
  });
  ctx.setLineDash([]);
}

function guarded(button, action) {
  document.getElementById(button).addEventListener("click", () => {
    try {
      action();
    } catch (err) {
      alert(String(err));
    }
  });
}

await init();

guarded("run-device", () => {
  const out = document.getElementById("device-out");
  try {
    out.textContent = device_report(num("radius"), num("length"), num("freq"), num("ec"), num("ej"), num("phi-dev") * Math.PI);
    out.className = "";
  } catch (err) {
    out.textContent = String(err);
    out.className = "error";
  }
});

guarded("run-transfer", () => {
  const [t, analytic, numeric] = split(transfer_curve(num("transfer-n")), 2);
  plot(document.getElementById("transfer-plot"), t, [analytic, numeric], ["closed form", "evolution"]);
});

guarded("run-decoherence", () => {
  const alphas = document
    .getElementById("alphas")
    .value.split(",")
    .map((s) => Number(s.trim()))
    .filter((a) => Number.isFinite(a));
  const data = decoherence_curves(num("phi-dec") * Math.PI, Float64Array.from(alphas), num("t-end"), 1001);
  const [t, ...curves] = split(data, alphas.length);
  plot(document.getElementById("decoherence-plot"), t, curves, alphas.map((a) => `alpha = ${a}`));
});

document.getElementById("run-device").click();
