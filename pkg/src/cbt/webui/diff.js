/** Diff pane: the combined diff of the selected clusters, changed lines
 * tinted with their owning cluster's color. Each changed line carries an
 * "extract" checkbox that marks its owning bead for a split. */
function tint(color) {
    // #rrggbb -> translucent fill so the text stays readable
    return color + "55";
}
export function renderDiff(result, session, view, handlers) {
    const container = document.createElement("div");
    container.className = "diff-view";
    if (result.kind === "empty") {
        const p = document.createElement("p");
        p.className = "placeholder";
        p.textContent = "Select one or more clusters to inspect their combined diff.";
        container.appendChild(p);
        return container;
    }
    if (result.kind === "conflict") {
        const banner = document.createElement("div");
        banner.className = "conflict-banner";
        banner.textContent =
            `Cannot show this selection: change #${result.seq + 1} needs the effect ` +
                `of unselected changes. Widen the selection. (${result.message})`;
        container.appendChild(banner);
        return container;
    }
    const colorOf = new Map(session.clusters.map((c) => [c.id, c.color]));
    const pending = new Set(view.pendingSplit);
    let currentFile = "";
    let block = null;
    for (const line of result.lines) {
        if (line.file !== currentFile || block === null) {
            currentFile = line.file;
            const header = document.createElement("div");
            header.className = "diff-file";
            header.textContent = line.file;
            container.appendChild(header);
            block = document.createElement("div");
            block.className = "diff-block";
            container.appendChild(block);
        }
        const row = document.createElement("div");
        row.className = `diff-line ${line.kind}`;
        if (line.owner) {
            // exact cluster color token on the edge, tinted fill for readability
            const token = colorOf.get(line.owner) ?? "#888888";
            row.style.borderLeft = `3px solid ${token}`;
            row.style.backgroundColor = tint(token);
            row.dataset.owner = line.owner;
            row.dataset.color = token;
        }
        if (line.owner_bead) {
            row.dataset.ownerBead = line.owner_bead;
        }
        const gutter = document.createElement("span");
        gutter.className = "gutter";
        const oldNo = line.old_line === null ? "" : String(line.old_line);
        const newNo = line.new_line === null ? "" : String(line.new_line);
        gutter.textContent = `${oldNo.padStart(4)} ${newNo.padStart(4)}`;
        row.appendChild(gutter);
        const marker = document.createElement("span");
        marker.className = "marker";
        marker.textContent = line.kind === "added" ? "+" : line.kind === "removed" ? "-" : " ";
        row.appendChild(marker);
        const text = document.createElement("span");
        text.className = "text";
        text.textContent = line.text.replace(/\n$/, "");
        row.appendChild(text);
        if (line.owner_bead) {
            const beadId = line.owner_bead;
            const extract = document.createElement("input");
            extract.type = "checkbox";
            extract.className = "extract";
            extract.title = `extract change ${beadId} into a new cluster`;
            extract.checked = pending.has(beadId);
            extract.addEventListener("change", () => handlers.onExtractToggle(beadId));
            row.appendChild(extract);
        }
        block.appendChild(row);
    }
    return container;
}
