// Expects `wasm-bindgen --target web --out-dir www/pkg` output next to this file.
import init, { basins, solve, trajectories } from "./pkg/polyrace_web.js";

const $ = (id) => document.getElementById(id);
const canvas = $("view");
const g = canvas.getContext("2d");
const log = (s) => { $("log").textContent = s; };

const half = () => Number($("half").value);
const toPx = (z) => [
  (z.re / half() + 1) * canvas.width / 2,
  (1 - z.im / half()) * canvas.height / 2,
];

function clear() {
  g.fillStyle = "#000";
  g.fillRect(0, 0, canvas.width, canvas.height);
  g.strokeStyle = "#333";
  g.beginPath();
  g.moveTo(canvas.width / 2, 0); g.lineTo(canvas.width / 2, canvas.height);
  g.moveTo(0, canvas.height / 2); g.lineTo(canvas.width, canvas.height / 2);
  g.stroke();
}

function dot(z, colour, r = 2) {
  const [x, y] = toPx(z);
  g.fillStyle = colour;
  g.fillRect(x - r / 2, y - r / 2, r, r);
}

function guard(f) {
  return () => {
    try { f(); } catch (e) { log(String(e)); }
  };
}

$("basins").onclick = guard(() => {
  const { width, height } = canvas;
  const t0 = performance.now();
  const px = basins($("family").value, width, height, half(), Number($("iters").value));
  g.putImageData(new ImageData(new Uint8ClampedArray(px), width, height), 0, 0);
  log(`basins in ${(performance.now() - t0).toFixed(0)} ms`);
});

$("solve").onclick = guard(() => {
  const r = JSON.parse(solve($("family").value, $("method").value));
  clear();
  for (const z of r.roots) dot(z, "#ffd23f", 3);
  const ops = r.real_adds + r.real_muls;
  log([
    `${r.family} via ${r.method}${r.winner ? ` (winner ${r.winner})` : ""}`,
    `${r.roots_found} of ${r.expected} roots, matched ${r.matched}`,
    `${ops} real ops, ${r.iters} iterations, max residual ${(r.max_residual ?? Infinity).toExponential(2)}`,
    r.error ? `error: ${r.error}` : "",
  ].join("\n"));
});

$("traj").onclick = guard(() => {
  const t = JSON.parse(trajectories($("family").value, Number($("sweeps").value)));
  clear();
  const n = t.frames.length;
  for (let k = 0; k < t.degree; k++) {
    g.strokeStyle = `hsl(${(360 * k) / t.degree}, 80%, 60%)`;
    g.beginPath();
    t.frames.forEach((f, i) => {
      const [x, y] = toPx(f[k]);
      if (i === 0) g.moveTo(x, y); else g.lineTo(x, y);
    });
    g.stroke();
  }
  for (const z of t.frames[n - 1]) dot(z, "#fff", 3);
  log(`${n - 1} sweeps, converged ${t.converged}`);
});

await init();
clear();
log("ready");
