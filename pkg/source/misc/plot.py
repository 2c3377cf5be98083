import os
import numpy as np
import matplotlib

matplotlib.use('Agg')
import matplotlib.pyplot as plt

from typing import Dict, List, Optional


class PlotConfigs:
    """Hardcoded plot configurations.
    """

    FIGURE_SIZE = (10, 6)
    FIGURE_DPI = 120

    MATCHED_COLOR = '#377eb8'
    TRIVIAL_COLOR = '#EB791E'
    PUBLISHED_COLOR = 'grey'

    BAR_WIDTH = 0.27
    TICKS_SIZE = 14
    LABEL_SIZE = 16
    LEGEND_SIZE = 14
    TITLE_SIZE = 16
    FILE_TYPE = "png"


def plot_costs(names: List[str], costs: Dict[str, List[Optional[int]]], title: str = 'Quantum cost',
               save_dir: str = 'res', file_name: str = 'costs', log_scale: bool = True) -> str:
    """ Grouped bar chart of quantum costs per benchmark.

    Args:
        names (List[str]): Benchmark names along the x-axis.
        costs (Dict[str, List[Optional[int]]]): Series name to one cost per benchmark;
            None leaves a gap. Series "matched", "trivial" and "published" get fixed colors.
        title (str, optional): Figure title. Defaults to 'Quantum cost'.
        save_dir (str, optional): Output directory, created if missing. Defaults to 'res'.
        file_name (str, optional): File name without extension. Defaults to 'costs'.
        log_scale (bool, optional): Logarithmic y-axis. Defaults to True.

    Returns:
        str: Path of the saved figure.
    """
    colors = {'matched': PlotConfigs.MATCHED_COLOR, 'trivial': PlotConfigs.TRIVIAL_COLOR,
              'published': PlotConfigs.PUBLISHED_COLOR}

    fig, ax = plt.subplots(figsize=PlotConfigs.FIGURE_SIZE, dpi=PlotConfigs.FIGURE_DPI)
    x = np.arange(len(names))
    offset = -(len(costs) - 1) / 2

    for k, (series, values) in enumerate(costs.items()):
        heights = np.array([np.nan if v is None else v for v in values], dtype=float)
        ax.bar(x + (offset + k) * PlotConfigs.BAR_WIDTH, heights, PlotConfigs.BAR_WIDTH,
               label=series, color=colors.get(series))

    ax.set_xticks(x)
    ax.set_xticklabels(names, fontsize=PlotConfigs.TICKS_SIZE)
    ax.tick_params(axis='y', labelsize=PlotConfigs.TICKS_SIZE)
    ax.set_ylabel('quantum cost', fontsize=PlotConfigs.LABEL_SIZE)
    ax.set_title(title, fontsize=PlotConfigs.TITLE_SIZE)
    if log_scale:
        ax.set_yscale('log')
    ax.legend(fontsize=PlotConfigs.LEGEND_SIZE)
    ax.grid(axis='y', alpha=0.3)

    os.makedirs(save_dir, exist_ok=True)
    path = os.path.join(save_dir, f'{file_name}.{PlotConfigs.FILE_TYPE}')
    fig.savefig(path, bbox_inches='tight')
    plt.close(fig)
    return path
