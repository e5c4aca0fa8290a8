import init, { Simulation, symbol_curves, cancellation_check } from "./pkg/regalpha_web.js";

const $ = (id) => document.getElementById(id);
const STEPS_PER_FRAME = 5;
const CURVES = [
  ["A₀", "#c0392b"],
  ["M", "#2471a3"],
  ["N", "#229954"],
  ["E", "#7d3c98"],
];

let sim = null;
let running = false;

function params() {
  return {
    preset: $("preset").value,
    alpha: Number($("alpha").value),
    nu: Number($("nu").value),
    epsilon: Number($("epsilon").value),
    n: Number($("n").value),
    seed: Number($("seed").value) >>> 0,
  };
}

function color(v, scale) {
  const t = Math.max(-1, Math.min(1, v / scale));
  return t >= 0
    ? [255, Math.round(255 * (1 - t)), Math.round(255 * (1 - t))]
    : [Math.round(255 * (1 + t)), Math.round(255 * (1 + t)), 255];
}

function draw(canvas, values, n, scale) {
  const ctx = canvas.getContext("2d");
  const img = ctx.createImageData(n, n);
  // row-major in (x1, x2): draw x1 to the right and x2 upward
  for (let i1 = 0; i1 < n; i1++) {
    for (let i2 = 0; i2 < n; i2++) {
      const [r, g, b] = color(values[i1 * n + i2], scale);
      const p = 4 * ((n - 1 - i2) * n + i1);
      img.data[p] = r;
      img.data[p + 1] = g;
      img.data[p + 2] = b;
      img.data[p + 3] = 255;
    }
  }
  const off = new OffscreenCanvas(n, n);
  off.getContext("2d").putImageData(img, 0, 0);
  ctx.imageSmoothingEnabled = false;
  ctx.drawImage(off, 0, 0, canvas.width, canvas.height);
}

function render() {
  const n = sim.n();
  draw($("phase"), sim.phase(), n, 1);
  const w = sim.vorticity();
  const wmax = w.reduce((m, v) => Math.max(m, Math.abs(v)), 1e-12);
  draw($("vorticity"), w, n, wmax);
  $("status").textContent =
    `t = ${sim.time().toFixed(3)}  dt = ${sim.dt().toExponential(2)}  ` +
    `energy = ${sim.energy().toFixed(5)}  max|φ| = ${sim.max_abs_phi().toFixed(4)}`;
}

function reset() {
  const p = params();
  try {
    if (sim) sim.free();
    sim = new Simulation(p.preset, p.n, p.alpha, p.nu, p.epsilon, p.seed);
    render();
  } catch (e) {
    sim = null;
    running = false;
    $("toggle").textContent = "Run";
    $("status").textContent = `error: ${e}`;
  }
}

function frame() {
  if (!running || !sim) return;
  try {
    sim.step(STEPS_PER_FRAME);
    render();
    requestAnimationFrame(frame);
  } catch (e) {
    running = false;
    $("toggle").textContent = "Run";
    $("status").textContent = `stopped: ${e}`;
  }
}

function plotSymbols() {
  const p = params();
  const kmax = Math.max(1, Number($("kmax").value) >>> 0);
  let rows;
  try {
    rows = symbol_curves(p.preset, p.alpha, p.nu, kmax);
  } catch (e) {
    $("legend").textContent = `error: ${e}`;
    return;
  }
  const canvas = $("symbol-plot");
  const ctx = canvas.getContext("2d");
  const [w, h, pad] = [canvas.width, canvas.height, 30];
  ctx.clearRect(0, 0, w, h);
  const count = rows.length / 5;
  let ymax = 1;
  for (let r = 0; r < count; r++) {
    for (let c = 1; c < 5; c++) ymax = Math.max(ymax, rows[5 * r + c]);
  }
  const x = (k) => pad + ((w - 2 * pad) * k) / kmax;
  const y = (v) => h - pad - ((h - 2 * pad) * v) / ymax;
  ctx.strokeStyle = "#888";
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  ctx.fillStyle = "#444";
  ctx.fillText("0", pad - 10, h - pad + 12);
  ctx.fillText(String(kmax), w - pad - 8, h - pad + 12);
  ctx.fillText(ymax.toPrecision(3), 2, pad + 4);
  CURVES.forEach(([, stroke], c) => {
    ctx.strokeStyle = stroke;
    ctx.beginPath();
    for (let r = 0; r < count; r++) {
      const px = x(rows[5 * r]);
      const py = y(rows[5 * r + c + 1]);
      if (r === 0) ctx.moveTo(px, py);
      else ctx.lineTo(px, py);
    }
    ctx.stroke();
  });
  $("legend").innerHTML = CURVES.map(
    ([name, stroke]) => `<span style="color:${stroke}">■ ${name}</span>`
  ).join("  ");
}

function check() {
  const p = params();
  try {
    const [adv, transport, korteweg] = cancellation_check(p.preset, p.seed);
    $("check-out").textContent =
      `${p.preset}, seed ${p.seed}, 16² grid\n` +
      `advection ⟨B₀(u), Eu⟩        ${adv.toExponential(2)}\n` +
      `transport ⟨B₁(u, φ), φ⟩      ${transport.toExponential(2)}\n` +
      `Korteweg stress vs. convective ${korteweg.toExponential(2)}`;
  } catch (e) {
    $("check-out").textContent = `error: ${e}`;
  }
}

await init();
$("reset").addEventListener("click", reset);
$("toggle").addEventListener("click", () => {
  if (!sim) reset();
  running = !running && sim !== null;
  $("toggle").textContent = running ? "Pause" : "Run";
  if (running) requestAnimationFrame(frame);
});
$("symbols").addEventListener("click", plotSymbols);
$("check").addEventListener("click", check);
reset();
plotSymbols();
