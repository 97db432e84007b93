package org.demo.ui;

import java.util.ArrayList;
import java.util.List;
import org.demo.app.Settings;

/** A horizontal toolbar of menu actions. */
public class Toolbar {
    private final List<MenuAction> actions = new ArrayList<>();
    private int iconSize = 16;

    public void addAction(MenuAction action) {
        actions.add(action);
    }

    public List<MenuAction> getActions() {
        return actions;
    }

    public void configure(Settings settings) {
        String size = MenuAction.getSettingOrDefault(settings, "toolbar.iconSize", "16");
        iconSize = Integer.parseInt(size);
        String visible = MenuAction.getSettingOrDefault(settings, "toolbar.visible", "true");
        for (MenuAction action : actions) {
            action.setEnabled(Boolean.parseBoolean(visible));
        }
    }

    public int getIconSize() {
        return iconSize;
    }
}
