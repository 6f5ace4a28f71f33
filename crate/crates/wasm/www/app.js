import init, { sphereProfile, cylinderProfile, certifyPlan, planNames } from "./pkg/isoprofile_wasm.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function call(json, msg) {
  const r = JSON.parse(json);
  if (msg) msg.textContent = r.error ?? "";
  return r.ok;
}

function plot(canvas, curve) {
  const g = canvas.getContext("2d");
  const w = canvas.width, h = canvas.height, pad = 40;
  g.clearRect(0, 0, w, h);
  const xmax = Math.max(...curve.volumes, curve.marker);
  const ymax = Math.max(...curve.areas) * 1.05;
  const x = (v) => pad + (v / xmax) * (w - 2 * pad);
  const y = (a) => h - pad - (a / ymax) * (h - 2 * pad);

  g.strokeStyle = "#999";
  g.beginPath();
  g.moveTo(pad, pad); g.lineTo(pad, h - pad); g.lineTo(w - pad, h - pad);
  g.stroke();
  g.fillStyle = "#555";
  g.fillText("0", pad - 10, h - pad + 14);
  g.fillText(xmax.toPrecision(4), w - pad - 20, h - pad + 14);
  g.fillText(ymax.toPrecision(4), 4, pad);
  g.fillText(curve.label, pad + 10, pad - 10);

  g.setLineDash([4, 4]);
  g.beginPath();
  g.moveTo(x(curve.marker), pad); g.lineTo(x(curve.marker), h - pad);
  g.stroke();
  g.setLineDash([]);

  g.strokeStyle = "#1565c0";
  g.lineWidth = 2;
  g.beginPath();
  g.moveTo(x(0), y(0));
  curve.volumes.forEach((v, i) => g.lineTo(x(v), y(curve.areas[i])));
  g.stroke();
  g.lineWidth = 1;
}

function drawSphere() {
  const c = call(sphereProfile(num("s-dim"), num("s-mu"), 400), $("s-msg"));
  if (c) plot($("s-plot"), c);
}

function drawCylinder() {
  const c = call(cylinderProfile(num("c-k"), num("c-mu"), num("c-max"), 400), $("c-msg"));
  if (c) plot($("c-plot"), c);
}

function certify() {
  const out = $("d-out");
  const r = JSON.parse(certifyPlan($("d-plan").value, num("d-c")));
  if (r.error) {
    out.innerHTML = `<p class="err">${r.error}</p>`;
    return;
  }
  const cert = r.ok;
  const rows = cert.regimes.map((g) => `<tr class="${g.passed ? "pass" : "fail"}">
      <td>${g.interval.lo}</td><td>${g.interval.hi ?? "&infin;"}</td><td>${g.method}</td>
      <td>${g.margin.toPrecision(6)}</td><td>${g.witness.toPrecision(6)}</td></tr>`).join("");
  out.innerHTML = `<p>${cert.claim} with c = ${cert.c.toPrecision(6)}:
      <strong class="${cert.status}">${cert.status}</strong></p>
    <table><tr><th>from</th><th>to</th><th>method</th><th>margin</th><th>witness</th></tr>${rows}</table>`;
}

await init();
for (const name of JSON.parse(planNames())) {
  $("d-plan").add(new Option(name, name));
}
$("s-go").onclick = drawSphere;
$("c-go").onclick = drawCylinder;
$("d-go").onclick = certify;
drawSphere();
drawCylinder();
