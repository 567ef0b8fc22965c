import init, { exampleSpec, evaluateSpec, paretoSweep, flowGraph } from "./pkg/dss_tradeoff_web.js";

const $ = (id) => document.getElementById(id);
const SVG = "http://www.w3.org/2000/svg";

function svgEl(name, attrs, text) {
  const el = document.createElementNS(SVG, name);
  for (const [k, v] of Object.entries(attrs)) el.setAttribute(k, v);
  if (text !== undefined) el.textContent = text;
  return el;
}

function clear(el) {
  while (el.firstChild) el.removeChild(el.firstChild);
}

// Runs `f`, showing any thrown message under the editor.
function guarded(f) {
  return () => {
    $("error").textContent = "";
    try {
      f();
    } catch (e) {
      $("error").textContent = String(e);
    }
  };
}

function loadExample() {
  const text = exampleSpec($("example").value);
  $("spec").value = JSON.stringify(JSON.parse(text), null, 1)
    .replace(/\[\s+([^\[\]{}]*?)\s+\]/g, (_, inner) => "[" + inner.replace(/\s+/g, " ") + "]");
}

function runEvaluate() {
  const r = JSON.parse(evaluateSpec($("spec").value));
  const rows = r.node_repair_cost
    .map((c, i) => `<tr><td>${i}</td><td>${c.exact}</td><td>${c.value.toFixed(4)}</td></tr>`)
    .join("");
  const sets = r.per_set
    .map((q, t) => `<tr><td>{${r.reconstruction_sets[t].join(",")}}</td><td>${q.exact}</td></tr>`)
    .join("");
  const verdict = r.feasible
    ? `<span class="good">B &le; Q, margin ${r.margin.exact}</span>`
    : `<span class="bad">B &gt; Q, margin ${r.margin.exact}</span>`;
  const a = r.argmin;
  $("evaluate-out").innerHTML = `
    <p>C<sub>s</sub> = ${r.storage_cost.exact}, C<sub>r</sub> = ${r.repair_cost.exact}
       (&asymp;${r.repair_cost.value.toFixed(4)}), Q = ${r.q.exact}, B = ${r.file_size.exact}: ${verdict}</p>
    <p>minimizing scenario: set ${a.set}, order [${a.nodes.join(", ")}], choices [${a.choices.join(", ")}]</p>
    <table><tr><th>node</th><th>r(&beta;)</th><th></th></tr>${rows}</table>
    <table><tr><th>set</th><th>min term</th></tr>${sets}</table>`;
  $("set").value = a.set;
  $("sequence").value = a.nodes.join(",");
  $("choices").value = a.choices.join(",");
}

function runPareto() {
  const r = JSON.parse(
    paretoSweep(
      $("spec").value,
      $("mode").value,
      Number($("k").value),
      Number($("d").value),
      Number($("lo").value),
      Number($("hi").value),
      Number($("count").value),
    ),
  );
  drawPareto(r.points);
  const rows = r.points
    .map(
      (p) =>
        `<tr><td>${p.lambda.toPrecision(4)}</td><td>${p.storage_cost.toFixed(3)}</td>` +
        `<td>${p.repair_cost.toFixed(3)}</td><td>${p.q.toFixed(3)}</td><td>${p.pareto ? "yes" : ""}</td></tr>`,
    )
    .join("");
  const failed = r.failures.map((f) => `<p class="bad">&lambda; = ${f.lambda}: ${f.status}</p>`).join("");
  $("pareto-out").innerHTML =
    `<table><tr><th>&lambda;</th><th>C_s</th><th>C_r</th><th>Q</th><th>front</th></tr>${rows}</table>${failed}`;
}

function drawPareto(points) {
  const svg = $("pareto-plot");
  clear(svg);
  const W = 520, H = 360, pad = 50;
  if (points.length === 0) return;
  const xs = points.map((p) => p.storage_cost), ys = points.map((p) => p.repair_cost);
  const span = (v) => {
    const lo = Math.min(...v), hi = Math.max(...v);
    return hi > lo ? [lo, hi] : [lo - 1, hi + 1];
  };
  const [x0, x1] = span(xs), [y0, y1] = span(ys);
  const sx = (x) => pad + ((x - x0) / (x1 - x0)) * (W - 2 * pad);
  const sy = (y) => H - pad - ((y - y0) / (y1 - y0)) * (H - 2 * pad);
  svg.append(svgEl("line", { x1: pad, y1: H - pad, x2: W - pad, y2: H - pad, stroke: "#444" }));
  svg.append(svgEl("line", { x1: pad, y1: pad, x2: pad, y2: H - pad, stroke: "#444" }));
  svg.append(svgEl("text", { x: W / 2, y: H - 12, "text-anchor": "middle" }, "storage cost C_s"));
  svg.append(svgEl("text", { x: 14, y: H / 2, transform: `rotate(-90 14 ${H / 2})`, "text-anchor": "middle" }, "repair cost C_r"));
  for (const [v, x, y, anchor] of [
    [x0, sx(x0), H - pad + 16, "start"],
    [x1, sx(x1), H - pad + 16, "end"],
  ]) svg.append(svgEl("text", { x, y, "text-anchor": anchor, "font-size": 11 }, v.toPrecision(4)));
  for (const [v, y] of [[y0, sy(y0)], [y1, sy(y1)]])
    svg.append(svgEl("text", { x: pad - 4, y: y + 4, "text-anchor": "end", "font-size": 11 }, v.toPrecision(4)));
  const front = points.filter((p) => p.pareto).sort((a, b) => a.storage_cost - b.storage_cost);
  if (front.length > 1) {
    const d = front.map((p, i) => `${i ? "L" : "M"}${sx(p.storage_cost)},${sy(p.repair_cost)}`).join(" ");
    svg.append(svgEl("path", { d, fill: "none", stroke: "#36c", "stroke-width": 1.5 }));
  }
  for (const p of points) {
    const c = svgEl("circle", {
      cx: sx(p.storage_cost),
      cy: sy(p.repair_cost),
      r: p.pareto ? 5 : 3,
      fill: p.pareto ? "#36c" : "#aaa",
    });
    c.append(svgEl("title", {}, `λ=${p.lambda.toPrecision(4)} C_s=${p.storage_cost.toFixed(3)} C_r=${p.repair_cost.toFixed(3)}`));
    svg.append(c);
  }
}

function runFlow() {
  const r = JSON.parse(
    flowGraph($("spec").value, Number($("set").value), $("sequence").value, $("choices").value, $("unbounded").checked),
  );
  const s = r.scenario;
  const agree = r.max_flow === r.term ? "good" : "bad";
  $("flow-out").innerHTML =
    `<p>order [${s.nodes.join(", ")}], choices [${s.choices.join(", ")}]: ` +
    `<span class="${agree}">max-flow ${r.max_flow}, closed-form term ${r.term}</span>; ` +
    `minimum cut (red) has capacity ${r.cut_capacity}</p>`;
  $("dot").textContent = r.dot;
  drawFlow(r);
}

function drawFlow(r) {
  const svg = $("flow-plot");
  clear(svg);
  const layers = Math.max(...r.vertices.map((v) => v.layer)) + 1;
  const perLayer = new Array(layers).fill(0);
  for (const v of r.vertices) perLayer[v.layer] = Math.max(perLayer[v.layer], v.row + 1);
  const W = Math.max(1000, layers * 110), H = Math.max(420, Math.max(...perLayer) * 70 + 40);
  svg.setAttribute("width", W);
  svg.setAttribute("height", H);
  const pos = new Map();
  for (const v of r.vertices) {
    const n = perLayer[v.layer];
    pos.set(v.id, [50 + (v.layer * (W - 100)) / (layers - 1), ((v.row + 1) * H) / (n + 1)]);
  }
  const defs = svgEl("defs", {});
  for (const [id, color] of [["arrow", "#666"], ["arrow-cut", "#c00"]]) {
    const m = svgEl("marker", { id, viewBox: "0 0 10 10", refX: 20, refY: 5, markerWidth: 6, markerHeight: 6, orient: "auto" });
    m.append(svgEl("path", { d: "M0,0 L10,5 L0,10 z", fill: color }));
    defs.append(m);
  }
  svg.append(defs);
  for (const e of r.edges) {
    const [x1, y1] = pos.get(e.from), [x2, y2] = pos.get(e.to);
    const color = e.cut ? "#c00" : "#666";
    svg.append(
      svgEl("line", {
        x1, y1, x2, y2,
        stroke: color,
        "stroke-width": e.cut ? 2.5 : 1,
        "marker-end": `url(#${e.cut ? "arrow-cut" : "arrow"})`,
      }),
    );
    const label = e.capacity === "inf" ? "∞" : `${e.flow}/${e.capacity}`;
    svg.append(svgEl("text", { x: (x1 + x2) / 2, y: (y1 + y2) / 2 - 4, "font-size": 10, fill: color, "text-anchor": "middle" }, label));
  }
  for (const v of r.vertices) {
    const [x, y] = pos.get(v.id);
    svg.append(svgEl("circle", { cx: x, cy: y, r: 14, fill: "#eef", stroke: "#335" }));
    svg.append(svgEl("text", { x, y: y + 28, "font-size": 10, "text-anchor": "middle" }, v.label));
  }
}

await init();
$("example").addEventListener("change", guarded(loadExample));
$("run-evaluate").addEventListener("click", guarded(runEvaluate));
$("run-pareto").addEventListener("click", guarded(runPareto));
$("run-flow").addEventListener("click", guarded(runFlow));
guarded(loadExample)();
