namespace purkit {}
