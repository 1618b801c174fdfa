import init, { braid, winding, generate } from "./pkg/vanlat_web.js";

const $ = (id) => document.getElementById(id);

function show(el, text, failed) {
  el.textContent = text;
  el.className = failed ? "error" : "";
}

const rows = (m) => m.map((r) => "[" + r.join(", ") + "]").join("\n");

function runBraid() {
  const r = JSON.parse(braid($("gram").value, Number($("parity").value), $("word").value));
  if (r.error) return show($("braid-out"), r.error, true);
  show($("braid-out"), [
    `word: ${r.word || "(empty)"}`,
    "Gram:", rows(r.gram),
    "basis change (columns are new thimbles):", rows(r.change),
    "Var^-1:", rows(r.var_inverse),
    "monodromy:", rows(r.monodromy),
    `order: ${r.order ?? "none found"}`,
    `variation relations hold: ${r.relations_hold}`,
  ].join("\n"));
}

function drawField(field, radius) {
  const c = $("field");
  const ctx = c.getContext("2d");
  const w = c.width;
  const scale = w / (2.4 * radius);
  const px = (x) => w / 2 + x * scale;
  const py = (y) => w / 2 - y * scale;
  ctx.clearRect(0, 0, w, w);
  ctx.strokeStyle = "#bbb";
  ctx.beginPath();
  ctx.arc(w / 2, w / 2, radius * scale, 0, 2 * Math.PI);
  ctx.stroke();
  ctx.strokeStyle = "#246";
  const len = 0.6 * (2 * radius / 16) * scale;
  for (const [x, y, u, v] of field) {
    const n = Math.hypot(u, v);
    const dx = (u / n) * len;
    const dy = (v / n) * len;
    const x0 = px(x);
    const y0 = py(y);
    ctx.beginPath();
    ctx.moveTo(x0, y0);
    ctx.lineTo(x0 + dx, y0 - dy);
    ctx.stroke();
    ctx.fillRect(x0 + dx - 1.5, y0 - dy - 1.5, 3, 3);
  }
}

function runWinding() {
  const radius = Number($("radius").value);
  const r = JSON.parse(winding($("poly").value, radius, 16));
  if (r.error) return show($("wind-out"), r.error, true);
  show($("wind-out"), `grad f = (${r.gradient[0]}, ${r.gradient[1]}), index ${r.index}`);
  drawField(r.field, radius);
}

function runGenerate() {
  const r = JSON.parse(generate(Number($("seed").value), Number($("n").value), Number($("p").value), Number($("rank").value)));
  if (r.error) return show($("gen-out"), r.error, true);
  const lines = [`n = ${r.n}, p = ${r.p}, signs = [${r.signs.join(", ")}]`];
  for (const l of r.levels) {
    lines.push(`level ${l.i} (parity ${l.parity}, sign ${l.sign}): index sum ${l.index_sum}`);
    lines.push("  Gram:", rows(l.gram).replace(/^/gm, "  "));
    lines.push("  sigma:", rows(l.sigma).replace(/^/gm, "  "));
  }
  lines.push(`index from level signatures: ${r.index}`);
  lines.push(`Euler chain: sums [${r.telescope.level_sums.join(", ")}], chi [${r.telescope.chis.join(", ")}], index ${r.telescope.index}`);
  show($("gen-out"), lines.join("\n"));
}

await init();
$("braid-run").onclick = runBraid;
$("wind-run").onclick = runWinding;
$("gen-run").onclick = runGenerate;
runBraid();
runWinding();
runGenerate();
