// jsdom has no 2D canvas; stub getContext so ScatterPlot degrades quietly
// (the projection pipeline stays fully testable without a raster backend).
HTMLCanvasElement.prototype.getContext = (() => null) as typeof HTMLCanvasElement.prototype.getContext;
